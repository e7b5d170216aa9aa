#include "picsim/models.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "picsim/numeric_io.hpp"

namespace picsim {

namespace {

constexpr double pi = std::numbers::pi;

void check_unit_range(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ParamError(std::string(name) + " must lie in [0, 1]");
}

void check_waveguide(const WaveguideParams& p) {
    if (!(p.length >= 0.0 && p.length <= 1.0))
        throw ParamError("waveguide length must lie in [0 m, 1 m]");
    if (!(p.loss_db_per_m >= 0.0)) throw ParamError("loss must be non-negative");
    if (!(p.lambda0 > 0.0)) throw ParamError("lambda0 must be positive");
}

// Field transmission over `length` of waveguide at vacuum wavelength lambda.
Complex through_amplitude(const WaveguideParams& p, double length, double lambda) {
    const double n = effective_index(p, lambda);
    const double phase = 2.0 * pi * n * length / lambda;
    const double mag = std::pow(10.0, -p.loss_db_per_m * length / 20.0);
    return std::polar(mag, phase);
}

std::vector<std::pair<std::string, std::string>> waveguide_param_list(const WaveguideParams& p,
                                                                      bool with_length) {
    std::vector<std::pair<std::string, std::string>> out;
    if (with_length) out.emplace_back("length", format_double(p.length));
    out.emplace_back("n0", format_double(p.n0));
    out.emplace_back("dn_dlambda", format_double(p.dn_dlambda));
    out.emplace_back("d2n_dlambda2", format_double(p.d2n_dlambda2));
    out.emplace_back("loss", format_double(p.loss_db_per_m));
    out.emplace_back("lambda0", format_double(p.lambda0));
    return out;
}

const std::vector<std::string> two_ports = {"n1", "n2"};
const std::vector<std::string> three_ports = {"n1", "n2", "n3"};
const std::vector<std::string> four_ports = {"n1", "n2", "n3", "n4"};
const std::vector<std::string> one_port = {"n1"};

class Waveguide final : public CompactModel {
public:
    explicit Waveguide(const WaveguideParams& p) : p_(p) { check_waveguide(p_); }

    std::string kind() const override { return "waveguide"; }
    const std::vector<std::string>& ports() const override { return two_ports; }

    SMatrix evaluate(const FrequencyGrid& grid) const override {
        SMatrix s(grid, ports());
        for (Index f = 0; f < grid.size(); ++f) {
            const Complex t = through_amplitude(p_, p_.length, grid.wavelength(f));
            s.slice(f)(0, 1) = t;
            s.slice(f)(1, 0) = t;
        }
        return s;
    }

    std::vector<std::pair<std::string, std::string>> params() const override {
        return waveguide_param_list(p_, true);
    }

private:
    WaveguideParams p_;
};

class YBranch final : public CompactModel {
public:
    std::string kind() const override { return "y_branch"; }
    const std::vector<std::string>& ports() const override { return three_ports; }

    SMatrix evaluate(const FrequencyGrid& grid) const override {
        SMatrix s(grid, ports());
        const double a = 1.0 / std::sqrt(2.0);
        for (Index f = 0; f < grid.size(); ++f) {
            auto& m = s.slice(f);
            m(0, 1) = m(1, 0) = a;
            m(0, 2) = m(2, 0) = a;
        }
        return s;
    }
};

class DirectionalCoupler final : public CompactModel {
public:
    explicit DirectionalCoupler(double coupling) : coupling_(coupling) {
        check_unit_range(coupling_, "coupling");
    }

    std::string kind() const override { return "directional_coupler"; }
    const std::vector<std::string>& ports() const override { return four_ports; }

    SMatrix evaluate(const FrequencyGrid& grid) const override {
        SMatrix s(grid, ports());
        const double t = std::sqrt(1.0 - coupling_);
        const Complex c(0.0, std::sqrt(coupling_));
        for (Index f = 0; f < grid.size(); ++f) {
            auto& m = s.slice(f);
            m(0, 2) = m(2, 0) = t;  // n1 <-> n3
            m(1, 3) = m(3, 1) = t;  // n2 <-> n4
            m(0, 3) = m(3, 0) = c;  // n1 <-> n4
            m(1, 2) = m(2, 1) = c;  // n2 <-> n3
        }
        return s;
    }

    std::vector<std::pair<std::string, std::string>> params() const override {
        return {{"coupling", format_double(coupling_)}};
    }

private:
    double coupling_;
};

class GratingCoupler final : public CompactModel {
public:
    GratingCoupler(double lambda_c, double peak_loss_db, double bw_1db)
        : lambda_c_(lambda_c), peak_loss_db_(peak_loss_db), bw_1db_(bw_1db) {
        if (!(lambda_c_ > 0.0)) throw ParamError("lambda_c must be positive");
        if (!(peak_loss_db_ >= 0.0)) throw ParamError("peak_loss must be non-negative");
        if (!(bw_1db_ > 0.0)) throw ParamError("bw_1db must be positive");
    }

    std::string kind() const override { return "grating_coupler"; }
    const std::vector<std::string>& ports() const override { return two_ports; }

    SMatrix evaluate(const FrequencyGrid& grid) const override {
        SMatrix s(grid, ports());
        for (Index f = 0; f < grid.size(); ++f) {
            const double detune = (grid.wavelength(f) - lambda_c_) / (bw_1db_ / 2.0);
            const double il_db = peak_loss_db_ + detune * detune;
            const double t = std::pow(10.0, -il_db / 20.0);
            s.slice(f)(0, 1) = t;
            s.slice(f)(1, 0) = t;
        }
        return s;
    }

    std::vector<std::pair<std::string, std::string>> params() const override {
        return {{"lambda_c", format_double(lambda_c_)},
                {"peak_loss", format_double(peak_loss_db_)},
                {"bw_1db", format_double(bw_1db_)}};
    }

private:
    double lambda_c_;
    double peak_loss_db_;
    double bw_1db_;
};

class HalfRing final : public CompactModel {
public:
    HalfRing(double radius, double coupling, const WaveguideParams& wg)
        : radius_(radius), coupling_(coupling), wg_(wg) {
        if (!(radius_ >= 1e-6 && radius_ <= 1e-3))
            throw ParamError("radius must lie in [1e-6 m, 1e-3 m]");
        check_unit_range(coupling_, "coupling");
        wg_.length = 0.0;
        check_waveguide(wg_);
    }

    std::string kind() const override { return "half_ring"; }
    const std::vector<std::string>& ports() const override { return four_ports; }

    SMatrix evaluate(const FrequencyGrid& grid) const override {
        SMatrix s(grid, ports());
        const double t = std::sqrt(1.0 - coupling_);
        const Complex c(0.0, std::sqrt(coupling_));
        const double half_arc = pi * radius_;
        for (Index f = 0; f < grid.size(); ++f) {
            const Complex phi = through_amplitude(wg_, half_arc, grid.wavelength(f));
            auto& m = s.slice(f);
            m(0, 1) = m(1, 0) = t;        // bus through
            m(2, 3) = m(3, 2) = t * phi;  // arc through
            m(0, 3) = m(3, 0) = c * phi;  // bus <-> far arc end
            m(1, 2) = m(2, 1) = c;        // bus <-> near arc end
        }
        return s;
    }

    std::vector<std::pair<std::string, std::string>> params() const override {
        auto out = waveguide_param_list(wg_, false);
        out.insert(out.begin(), {"coupling", format_double(coupling_)});
        out.insert(out.begin(), {"radius", format_double(radius_)});
        return out;
    }

private:
    double radius_;
    double coupling_;
    WaveguideParams wg_;
};

class Crossover final : public CompactModel {
public:
    explicit Crossover(double crosstalk) : crosstalk_(crosstalk) {
        check_unit_range(crosstalk_, "crosstalk");
    }

    std::string kind() const override { return "crossover"; }
    const std::vector<std::string>& ports() const override { return four_ports; }

    SMatrix evaluate(const FrequencyGrid& grid) const override {
        SMatrix s(grid, ports());
        const double x = std::sqrt(1.0 - crosstalk_);
        const Complex bar(0.0, std::sqrt(crosstalk_));
        for (Index f = 0; f < grid.size(); ++f) {
            auto& m = s.slice(f);
            m(0, 3) = m(3, 0) = x;    // crossing paths
            m(1, 2) = m(2, 1) = x;
            m(0, 2) = m(2, 0) = bar;  // parasitic straight-through
            m(1, 3) = m(3, 1) = bar;
        }
        return s;
    }

    std::vector<std::pair<std::string, std::string>> params() const override {
        return {{"crosstalk", format_double(crosstalk_)}};
    }

private:
    double crosstalk_;
};

class Terminator final : public CompactModel {
public:
    std::string kind() const override { return "terminator"; }
    const std::vector<std::string>& ports() const override { return one_port; }
    SMatrix evaluate(const FrequencyGrid& grid) const override { return SMatrix(grid, ports()); }
};

class SParamFile final : public CompactModel {
public:
    SParamFile(std::string path, SMatrix table)
        : path_(std::move(path)), table_(std::move(table)), ports_(table_.ports()) {}

    std::string kind() const override { return "sparam_file"; }
    const std::vector<std::string>& ports() const override { return ports_; }

    SMatrix evaluate(const FrequencyGrid& grid) const override {
        return interpolate(table_, grid);
    }

    std::vector<std::pair<std::string, std::string>> params() const override {
        return {{"path", path_}};
    }

private:
    std::string path_;
    SMatrix table_;
    std::vector<std::string> ports_;
};

}  // namespace

double effective_index(const WaveguideParams& p, double lambda_m) {
    const double d = lambda_m - p.lambda0;
    return p.n0 + p.dn_dlambda * d + 0.5 * p.d2n_dlambda2 * d * d;
}

double group_index(const WaveguideParams& p, double lambda_m) {
    const double d = lambda_m - p.lambda0;
    const double dn = p.dn_dlambda + p.d2n_dlambda2 * d;
    return effective_index(p, lambda_m) - lambda_m * dn;
}

ModelPtr waveguide(const WaveguideParams& p) { return std::make_shared<Waveguide>(p); }

ModelPtr waveguide(double length_m) {
    WaveguideParams p;
    p.length = length_m;
    return waveguide(p);
}

ModelPtr y_branch() { return std::make_shared<YBranch>(); }

ModelPtr directional_coupler(double coupling) {
    return std::make_shared<DirectionalCoupler>(coupling);
}

ModelPtr grating_coupler(double lambda_c, double peak_loss_db, double bw_1db_m) {
    return std::make_shared<GratingCoupler>(lambda_c, peak_loss_db, bw_1db_m);
}

ModelPtr half_ring(double radius_m, double coupling, const WaveguideParams& wg) {
    return std::make_shared<HalfRing>(radius_m, coupling, wg);
}

ModelPtr crossover(double crosstalk) { return std::make_shared<Crossover>(crosstalk); }

ModelPtr terminator() { return std::make_shared<Terminator>(); }

void write_sparam(std::ostream& out, const SMatrix& s) {
    out << "sparam v1 ports=" << s.n_ports() << " names=";
    for (Index i = 0; i < s.n_ports(); ++i) {
        if (i) out << ',';
        out << s.ports()[static_cast<size_t>(i)];
    }
    out << '\n';
    const Index n = s.n_ports();
    for (Index f = 0; f < s.n_freqs(); ++f) {
        out << format_double(s.grid()[f]);
        const auto& m = s.slice(f);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                out << ' ' << format_double(m(i, j).real()) << ' '
                    << format_double(m(i, j).imag());
        out << '\n';
    }
}

void write_sparam_file(const std::string& path, const SMatrix& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_sparam(out, s);
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

SMatrix read_sparam(std::istream& in) {
    std::string line;
    int lineno = 0;
    Index n_ports = -1;
    std::vector<std::string> names;
    bool have_header = false;

    // header: first non-comment, non-blank line
    while (!have_header && std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() != 4 || toks[0] != "sparam" || toks[1] != "v1" ||
            toks[2].rfind("ports=", 0) != 0 || toks[3].rfind("names=", 0) != 0)
            throw ParseError(lineno, "expected header 'sparam v1 ports=<N> names=<p1,...>'");
        auto count = parse_integer(toks[2].substr(6));
        if (!count || *count < 1) throw ParseError(lineno, "bad port count");
        n_ports = static_cast<Index>(*count);
        std::string rest = toks[3].substr(6);
        size_t start = 0;
        while (true) {
            size_t comma = rest.find(',', start);
            names.push_back(rest.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (static_cast<Index>(names.size()) != n_ports)
            throw ParseError(lineno, "port count does not match the name list");
        for (const auto& nm : names)
            if (nm.empty()) throw ParseError(lineno, "empty port name");
        have_header = true;
    }
    if (!have_header) throw ParseError(lineno == 0 ? 1 : lineno, "missing header");

    std::vector<double> freqs;
    std::vector<Eigen::MatrixXcd> slices;
    const size_t fields = 1 + 2 * static_cast<size_t>(n_ports) * static_cast<size_t>(n_ports);
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = split_ws(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() != fields)
            throw ParseError(lineno, "expected " + std::to_string(fields) + " fields, got " +
                                         std::to_string(toks.size()));
        std::vector<double> vals(fields);
        for (size_t i = 0; i < fields; ++i) {
            auto v = parse_double(toks[i]);
            if (!v) throw ParseError(lineno, "bad number '" + toks[i] + "'");
            vals[i] = *v;
        }
        if (!(vals[0] > 0.0)) throw ParseError(lineno, "frequency must be positive");
        if (!freqs.empty() && !(vals[0] > freqs.back()))
            throw ParseError(lineno, "frequencies must be strictly increasing");
        freqs.push_back(vals[0]);
        Eigen::MatrixXcd m(n_ports, n_ports);
        size_t at = 1;
        for (Index i = 0; i < n_ports; ++i)
            for (Index j = 0; j < n_ports; ++j) {
                m(i, j) = Complex(vals[at], vals[at + 1]);
                at += 2;
            }
        slices.push_back(std::move(m));
    }
    if (freqs.empty()) throw ParseError(lineno, "no data rows");

    SMatrix out(FrequencyGrid(Eigen::Map<const Eigen::VectorXd>(
                    freqs.data(), static_cast<Index>(freqs.size()))),
                names);
    for (size_t f = 0; f < slices.size(); ++f) out.slice(static_cast<Index>(f)) = slices[f];
    return out;
}

SMatrix read_sparam_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_sparam(in);
}

ModelPtr load_sparam_file(const std::string& path) {
    SMatrix table = read_sparam_file(path);
    // mangle dotted labels so they stay legal pin names
    std::vector<std::string> ports = table.ports();
    for (auto& p : ports)
        for (auto& ch : p)
            if (ch == '.') ch = '_';
    return std::make_shared<SParamFile>(path, table.relabeled(std::move(ports)));
}

}  // namespace picsim
