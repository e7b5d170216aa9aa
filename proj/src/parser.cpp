#include "picsim/parser.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "picsim/numeric_io.hpp"

namespace picsim {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double need_number(const std::map<std::string, std::string>& kv, const std::string& key,
                   double fallback, int lineno) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    auto v = parse_double(it->second);
    if (!v) throw ParseError(lineno, "bad number for " + key + ": '" + it->second + "'");
    return *v;
}

// builtin model kinds and the parameter keys each accepts
const std::map<std::string, std::vector<std::string>> builtin_kinds = {
    {"waveguide", {"length", "n0", "dn_dlambda", "d2n_dlambda2", "loss", "lambda0"}},
    {"y_branch", {}},
    {"directional_coupler", {"coupling"}},
    {"grating_coupler", {"lambda_c", "peak_loss", "bw_1db"}},
    {"half_ring", {"radius", "coupling", "n0", "dn_dlambda", "d2n_dlambda2", "loss", "lambda0"}},
    {"crossover", {"crosstalk"}},
    {"terminator", {}},
    {"sparam_file", {"path"}},
};

WaveguideParams waveguide_params_from(const std::map<std::string, std::string>& kv,
                                      int lineno) {
    WaveguideParams p;
    p.length = need_number(kv, "length", p.length, lineno);
    p.n0 = need_number(kv, "n0", p.n0, lineno);
    p.dn_dlambda = need_number(kv, "dn_dlambda", p.dn_dlambda, lineno);
    p.d2n_dlambda2 = need_number(kv, "d2n_dlambda2", p.d2n_dlambda2, lineno);
    p.loss_db_per_m = need_number(kv, "loss", p.loss_db_per_m, lineno);
    p.lambda0 = need_number(kv, "lambda0", p.lambda0, lineno);
    return p;
}

ModelPtr build_model(const std::string& kind, const std::map<std::string, std::string>& kv,
                     int lineno, const std::filesystem::path& base_dir) {
    auto allowed = builtin_kinds.find(kind);
    if (allowed == builtin_kinds.end()) throw ParseError(lineno, "unknown model kind '" + kind + "'");
    for (const auto& [key, value] : kv)
        if (std::find(allowed->second.begin(), allowed->second.end(), key) ==
            allowed->second.end())
            throw ParseError(lineno, kind + " does not take parameter '" + key + "'");
    try {
        if (kind == "waveguide") return waveguide(waveguide_params_from(kv, lineno));
        if (kind == "y_branch") return y_branch();
        if (kind == "directional_coupler")
            return directional_coupler(need_number(kv, "coupling", 0.5, lineno));
        if (kind == "grating_coupler")
            return grating_coupler(need_number(kv, "lambda_c", 1.55e-6, lineno),
                                   need_number(kv, "peak_loss", 3.0, lineno),
                                   need_number(kv, "bw_1db", 35e-9, lineno));
        if (kind == "half_ring")
            return half_ring(need_number(kv, "radius", 10e-6, lineno),
                             need_number(kv, "coupling", 0.1, lineno),
                             waveguide_params_from(kv, lineno));
        if (kind == "crossover") return crossover(need_number(kv, "crosstalk", 0.0, lineno));
        if (kind == "terminator") return terminator();
        // sparam_file
        auto it = kv.find("path");
        if (it == kv.end()) throw ParseError(lineno, "sparam_file requires path=<file>");
        std::filesystem::path p(it->second);
        if (p.is_relative()) p = base_dir / p;
        return load_sparam_file(p.string());
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(lineno, e.what());
    }
}

ParsedNetlist parse_impl(const std::string& text, const std::string& name,
                         const std::filesystem::path& base_dir) {
    ParsedNetlist out{Subcircuit(name), std::nullopt};
    std::map<std::string, ModelPtr> models;
    std::map<std::string, ModelPtr> builtins_used;  // one instance per kind

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        const std::string& stmt = toks[0];
        try {
            if (stmt == "model") {
                if (toks.size() < 3) throw ParseError(lineno, "model needs a name and a kind");
                const std::string& mname = toks[1];
                if (!valid_name(mname)) throw ParseError(lineno, "invalid model name '" + mname + "'");
                if (models.count(mname))
                    throw ParseError(lineno, "model '" + mname + "' already declared");
                std::map<std::string, std::string> kv;
                for (size_t i = 3; i < toks.size(); ++i) {
                    const size_t eq = toks[i].find('=');
                    if (eq == std::string::npos || eq == 0 || eq + 1 == toks[i].size())
                        throw ParseError(lineno, "expected key=value, got '" + toks[i] + "'");
                    if (!kv.emplace(toks[i].substr(0, eq), toks[i].substr(eq + 1)).second)
                        throw ParseError(lineno, "duplicate parameter '" + toks[i].substr(0, eq) + "'");
                }
                models[mname] = build_model(toks[2], kv, lineno, base_dir);
            } else if (stmt == "comp") {
                if (toks.size() != 3) throw ParseError(lineno, "comp needs an instance and a model");
                const std::string& inst = toks[1];
                if (!valid_dotted_name(inst))
                    throw ParseError(lineno, "invalid instance name '" + inst + "'");
                ModelPtr m;
                if (auto it = models.find(toks[2]); it != models.end()) {
                    m = it->second;
                } else if (builtin_kinds.count(toks[2])) {
                    // builtin kind with defaults; shared across uses
                    auto [bit, fresh] = builtins_used.try_emplace(toks[2]);
                    if (fresh) bit->second = build_model(toks[2], {}, lineno, base_dir);
                    m = bit->second;
                } else {
                    throw ParseError(lineno, "unknown model '" + toks[2] + "'");
                }
                out.circuit.add(m, inst);
            } else if (stmt == "connect") {
                if (toks.size() != 3) throw ParseError(lineno, "connect needs two endpoints");
                const PinId a = out.circuit.resolve(toks[1]);
                const PinId b = out.circuit.resolve(toks[2]);
                const auto& ia = out.circuit.instance(a.instance);
                const auto& ib = out.circuit.instance(b.instance);
                out.circuit.connect(a.instance, ia.pins()[static_cast<size_t>(a.pin)],
                                    b.instance, ib.pins()[static_cast<size_t>(b.pin)]);
            } else if (stmt == "port") {
                if (toks.size() != 4 || toks[2] != "as")
                    throw ParseError(lineno, "expected: port <inst>.<pin> as <alias>");
                if (!valid_name(toks[3]))
                    throw ParseError(lineno, "invalid alias '" + toks[3] + "'");
                const PinId p = out.circuit.resolve(toks[1]);
                out.circuit.alias_port(
                    p.instance,
                    out.circuit.instance(p.instance).pins()[static_cast<size_t>(p.pin)],
                    toks[3]);
            } else if (stmt == "sweep") {
                if (toks.size() != 4)
                    throw ParseError(lineno, "expected: sweep <start_m> <stop_m> <points>");
                if (out.sweep) throw ParseError(lineno, "duplicate sweep statement");
                auto start = parse_double(toks[1]);
                auto stop = parse_double(toks[2]);
                auto pts = parse_integer(toks[3]);
                if (!start || !stop || !pts) throw ParseError(lineno, "bad sweep values");
                SweepSpec spec;
                spec.start = *start;
                spec.stop = *stop;
                spec.n_points = static_cast<Index>(*pts);
                spec.mode = SweepMode::wavelength;
                (void)spec.grid();  // validate now, with a line number
                out.sweep = spec;
            } else {
                throw ParseError(lineno, "unknown statement '" + stmt + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(lineno, e.what());
        }
    }
    return out;
}

}  // namespace

ParsedNetlist parse_netlist(const std::string& text, const std::string& name) {
    return parse_impl(text, name, std::filesystem::current_path());
}

ParsedNetlist parse_netlist_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::filesystem::path p(path);
    return parse_impl(buf.str(), p.stem().string(),
                      p.has_parent_path() ? p.parent_path() : std::filesystem::current_path());
}

std::string emit_netlist(const Subcircuit& circuit, const std::optional<SweepSpec>& sweep) {
    const Subcircuit flat = circuit.is_flat() ? circuit : flatten(circuit);
    std::ostringstream out;
    out << "# " << flat.name() << "\n";

    // declare each distinct model once, in first-use order
    std::map<const CompactModel*, std::string> model_names;
    int counter = 0;
    for (const auto& inst : flat.instances()) {
        const CompactModel* key = inst.model().get();
        if (model_names.count(key)) continue;
        std::string mname;
        do {
            mname = "m" + std::to_string(++counter);
        } while (flat.has_instance(mname));
        model_names[key] = mname;
        out << "model " << mname << ' ' << inst.model()->kind();
        for (const auto& [k, v] : inst.model()->params()) out << ' ' << k << '=' << v;
        out << '\n';
    }
    for (const auto& inst : flat.instances()) {
        out << "comp " << inst.name() << ' ' << model_names.at(inst.model().get()) << '\n';
        if (inst.pins() != inst.model()->ports()) {
            // pin renames are not representable; refuse rather than emit lies
            for (size_t p = 0; p < inst.pins().size(); ++p)
                if (inst.pins()[p] != inst.model()->ports()[p])
                    throw ParamError("cannot emit renamed pin '" + inst.name() + "." +
                                     inst.pins()[p] + "'; rename pins only in the API");
        }
    }
    for (const Connection& c : flat.connections())
        out << "connect " << c.a.instance << '.'
            << flat.instance(c.a.instance).pins()[static_cast<size_t>(c.a.pin)] << ' '
            << c.b.instance << '.'
            << flat.instance(c.b.instance).pins()[static_cast<size_t>(c.b.pin)] << '\n';
    for (const auto& [key, alias] : flat.aliases()) {
        if (flat.pin_connected(key.first, key.second)) continue;
        if (!valid_name(alias)) continue;  // hierarchical aliases are derivable, skip
        out << "port " << key.first << '.'
            << flat.instance(key.first).pins()[static_cast<size_t>(key.second)] << " as "
            << alias << '\n';
    }
    if (sweep) {
        if (sweep->mode != SweepMode::wavelength)
            throw ParamError("netlists store wavelength sweeps only");
        out << "sweep " << format_double(sweep->start) << ' ' << format_double(sweep->stop)
            << ' ' << sweep->n_points << '\n';
    }
    return out.str();
}

}  // namespace picsim
