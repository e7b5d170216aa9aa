#include "picsim/cli_app.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "picsim/cascade.hpp"
#include "picsim/numeric_io.hpp"
#include "picsim/parser.hpp"
#include "picsim/reference_circuits.hpp"
#include "picsim/simulate.hpp"

namespace picsim {

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse = 1;
constexpr int exit_sim = 2;
constexpr int exit_usage = 64;

struct SimulateOptions {
    std::string netlist_path;
    std::vector<std::string> from;
    std::vector<std::string> to;
    bool all_pairs = false;
    double start = 0;  // 0 = keep the netlist/default value
    double stop = 0;
    long points = 0;
    std::string format = "csv";
    std::string out_path;
};

struct BenchmarkOptions {
    std::vector<int> counts{10, 100};
    int repeats = 10;
    std::string out_path;
};

int write_output(const std::string& out_path, const std::string& body, std::ostream& err) {
    if (out_path.empty()) {
        std::cout << body;
        return exit_ok;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        err << "cannot open output file '" << out_path << "'\n";
        return exit_usage;
    }
    out << body;
    return exit_ok;
}

std::string render_csv(const SweepResult& result,
                       const std::vector<std::pair<Index, Index>>& pairs) {
    const std::vector<std::string>& ports = result.s().ports();
    const FrequencyGrid& grid = result.grid();
    std::ostringstream csv;
    csv << "wavelength_m,frequency_Hz";
    for (const auto& [f, t] : pairs) {
        const std::string col =
            ports[static_cast<size_t>(f)] + "->" + ports[static_cast<size_t>(t)];
        csv << ',' << col << ".re," << col << ".im," << col << ".power," << col
            << ".phase_rad";
    }
    csv << '\n';
    for (Index g = 0; g < grid.size(); ++g) {
        csv << format_double(grid.wavelength(g)) << ',' << format_double(grid[g]);
        for (const auto& [f, t] : pairs) {
            const Complex v = result.s().slice(g)(t, f);
            csv << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
                << format_double(std::norm(v)) << ',' << format_double(std::arg(v));
        }
        csv << '\n';
    }
    return csv.str();
}

std::string render_json(const std::string& circuit_name, const SweepResult& result,
                        const std::vector<std::pair<Index, Index>>& pairs) {
    const std::vector<std::string>& ports = result.s().ports();
    const FrequencyGrid& grid = result.grid();
    nlohmann::json doc;
    doc["netlist"] = circuit_name;
    auto wl = nlohmann::json::array(), fr = nlohmann::json::array();
    for (Index g = 0; g < grid.size(); ++g) {
        wl.push_back(grid.wavelength(g));
        fr.push_back(grid[g]);
    }
    doc["wavelength_m"] = std::move(wl);
    doc["frequency_Hz"] = std::move(fr);
    doc["results"] = nlohmann::json::array();
    for (const auto& [f, t] : pairs) {
        nlohmann::json entry;
        entry["from"] = ports[static_cast<size_t>(f)];
        entry["to"] = ports[static_cast<size_t>(t)];
        auto re = nlohmann::json::array(), im = nlohmann::json::array(),
             power = nlohmann::json::array(), phase = nlohmann::json::array();
        for (Index g = 0; g < grid.size(); ++g) {
            const Complex v = result.s().slice(g)(t, f);
            re.push_back(v.real());
            im.push_back(v.imag());
            power.push_back(std::norm(v));
            phase.push_back(std::arg(v));
        }
        entry["re"] = std::move(re);
        entry["im"] = std::move(im);
        entry["power"] = std::move(power);
        entry["phase_rad"] = std::move(phase);
        doc["results"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

int run_simulate(const SimulateOptions& opt, std::ostream& err) {
    std::optional<ParsedNetlist> parsed;
    try {
        parsed = parse_netlist_file(opt.netlist_path);
    } catch (const Error& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_parse;
    }

    SweepSpec spec = parsed->sweep.value_or(SweepSpec{});
    if (opt.start > 0) spec.start = opt.start;
    if (opt.stop > 0) spec.stop = opt.stop;
    if (opt.points > 0) spec.n_points = static_cast<Index>(opt.points);
    try {
        (void)spec.grid();
    } catch (const Error& e) {
        err << "bad sweep range: " << e.what() << "\n";
        return exit_usage;
    }

    std::optional<SweepResult> result;
    try {
        result = run_sweep(parsed->circuit, spec);
    } catch (const Error& e) {
        err << "simulation error: " << e.what() << "\n";
        return exit_sim;
    }

    const std::vector<std::string>& ports = result->s().ports();
    std::vector<std::pair<Index, Index>> pairs;  // (from, to) port indices
    if (opt.all_pairs) {
        for (Index i = 0; i < static_cast<Index>(ports.size()); ++i)
            for (Index j = 0; j < static_cast<Index>(ports.size()); ++j)
                pairs.emplace_back(i, j);
        if (pairs.empty()) {
            err << "circuit has no external ports\n";
            return exit_usage;
        }
    } else if (!opt.from.empty()) {
        try {
            for (size_t p = 0; p < opt.from.size(); ++p)
                pairs.emplace_back(result->pin(opt.from[p]), result->pin(opt.to[p]));
        } catch (const Error& e) {
            err << e.what() << "\n";
            return exit_usage;
        }
    } else if (ports.size() == 1) {
        pairs.emplace_back(0, 0);  // reflection off the only port
    } else if (ports.size() == 2) {
        pairs.emplace_back(0, 1);  // natural through pair
    } else {
        err << "circuit has " << ports.size()
            << " external ports; pick pairs with --from/--to or use --all-pairs\n";
        return exit_usage;
    }

    const std::string body = opt.format == "csv"
                                 ? render_csv(*result, pairs)
                                 : render_json(parsed->circuit.name(), *result, pairs);
    return write_output(opt.out_path, body, err);
}

int run_benchmark(const BenchmarkOptions& opt, std::ostream& err) {
    for (int c : opt.counts)
        if (c < 1) {
            err << "--mzi-counts entries must be >= 1\n";
            return exit_usage;
        }
    if (opt.counts.empty() || opt.repeats < 1) {
        err << "need at least one chain size and --repeats >= 1\n";
        return exit_usage;
    }
    const FrequencyGrid grid = SweepSpec{}.grid();
    const int smallest = *std::min_element(opt.counts.begin(), opt.counts.end());
    double smallest_mean = 0;
    std::vector<std::pair<int, double>> rows;
    for (int count : opt.counts) {
        const Subcircuit chain = make_mzi_chain(count);
        double total = 0;
        for (int r = 0; r < opt.repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const ReducedNetwork reduced = reduce_circuit(chain, grid, 1);
            const auto t1 = std::chrono::steady_clock::now();
            if (reduced.s.n_ports() != 2) {
                err << "benchmark circuit reduced to " << reduced.s.n_ports()
                    << " ports, expected 2\n";
                return exit_sim;
            }
            total += std::chrono::duration<double>(t1 - t0).count();
        }
        const double mean = total / opt.repeats;
        if (count == smallest) smallest_mean = mean;
        rows.emplace_back(count, mean);
    }
    std::ostringstream csv;
    csv << "mzi_count,mean_seconds,ratio_vs_smallest\n";
    for (const auto& [count, mean] : rows)
        csv << count << ',' << format_double(mean) << ','
            << format_double(mean / smallest_mean) << '\n';
    return write_output(opt.out_path, csv.str(), err);
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Photonic circuit frequency-domain simulator"};
    app.require_subcommand(1);

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Sweep a netlist and write results");
    simulate->add_option("netlist", sim.netlist_path, "Netlist file (.phc)")->required();
    simulate->add_option("--from", sim.from, "Input port (repeatable, pairs with --to)");
    simulate->add_option("--to", sim.to, "Output port (repeatable, pairs with --from)");
    simulate->add_flag("--all-pairs", sim.all_pairs, "Emit every ordered port pair");
    simulate->add_option("--start", sim.start, "Sweep start wavelength in meters");
    simulate->add_option("--stop", sim.stop, "Sweep stop wavelength in meters");
    simulate->add_option("--points", sim.points, "Number of sweep points");
    simulate->add_option("--format", sim.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--out", sim.out_path, "Output file (default: stdout)");

    BenchmarkOptions bench;
    CLI::App* benchmark =
        app.add_subcommand("benchmark", "Time MZI-chain reduction at several sizes");
    benchmark->add_option("--mzi-counts", bench.counts, "Chain sizes to time")
        ->delimiter(',');
    benchmark->add_option("--repeats", bench.repeats, "Runs averaged per size");
    benchmark->add_option("--out", bench.out_path, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    if (simulate->parsed()) {
        if (sim.from.size() != sim.to.size()) {
            std::cerr << "--from and --to must be given in pairs\n";
            return exit_usage;
        }
        if (sim.all_pairs && !sim.from.empty()) {
            std::cerr << "--all-pairs cannot be combined with --from/--to\n";
            return exit_usage;
        }
        if (sim.start < 0 || sim.stop < 0 || sim.points < 0) {
            std::cerr << "sweep overrides must be positive\n";
            return exit_usage;
        }
        return run_simulate(sim, std::cerr);
    }
    return run_benchmark(bench, std::cerr);
}

}  // namespace picsim
