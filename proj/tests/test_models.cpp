#include "picsim/models.hpp"

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "testutil.hpp"

using namespace picsim;
using picsim::testutil::bitwise_equal;

namespace {

constexpr double pi = std::numbers::pi;

FrequencyGrid band(Index n = 5) { return picsim::testutil::small_band_grid(n); }

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("picsim_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("effective and group index") {
    const WaveguideParams p;  // defaults
    CHECK(effective_index(p, p.lambda0) == p.n0);
    // linear dispersion: n_g = n0 - lambda0 * dn/dlambda everywhere
    CHECK(group_index(p, p.lambda0) == doctest::Approx(4.2015).epsilon(1e-12));
    CHECK(group_index(p, 1.56e-6) == doctest::Approx(4.2015).epsilon(1e-12));

    WaveguideParams q = p;
    q.d2n_dlambda2 = 1e12;
    const double d = 10e-9;
    CHECK(effective_index(q, q.lambda0 + d) ==
          doctest::Approx(q.n0 + q.dn_dlambda * d + 0.5 * 1e12 * d * d).epsilon(1e-12));
}

TEST_CASE("waveguide scattering entries") {
    WaveguideParams p;
    p.length = 100e-6;
    const ModelPtr wg = waveguide(p);
    CHECK(wg->kind() == "waveguide");
    CHECK(wg->ports() == std::vector<std::string>{"n1", "n2"});

    const double lambda = 1.55e-6;
    const SMatrix s = wg->evaluate(FrequencyGrid({wavelength_to_frequency(lambda)}));
    const Complex t = s.slice(0)(0, 1);
    CHECK(s.slice(0)(1, 0) == t);
    CHECK(s.slice(0)(0, 0) == Complex(0.0));
    CHECK(s.slice(0)(1, 1) == Complex(0.0));
    // magnitude from dB/m loss, phase from the effective index
    CHECK(std::abs(t) == doctest::Approx(std::pow(10.0, -300.0 * 100e-6 / 20.0))
                             .epsilon(1e-14));
    const double expected_phase = 2.0 * pi * effective_index(p, lambda) * p.length / lambda;
    CHECK(std::arg(t) ==
          doctest::Approx(std::remainder(expected_phase, 2.0 * pi)).epsilon(1e-9));

    CHECK(is_reciprocal(wg->evaluate(band()), 1e-15));
    CHECK(max_singular_value(wg->evaluate(band())).maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("waveguide length additivity") {
    // tolerance 1e-12 caps the usable length: the two evaluation routes round
    // the accumulated phase differently, drifting ~ phase * machine epsilon
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> len(1e-6, 60e-6);
    const FrequencyGrid g = band(7);
    for (int trial = 0; trial < 100; ++trial) {
        WaveguideParams a, b, ab;
        a.length = len(rng);
        b.length = len(rng);
        ab.length = a.length + b.length;
        const SMatrix sa = waveguide(a)->evaluate(g);
        const SMatrix sb = waveguide(b)->evaluate(g);
        const SMatrix sab = waveguide(ab)->evaluate(g);
        for (Index f = 0; f < g.size(); ++f)
            CHECK(std::abs(sab.slice(f)(0, 1) - sa.slice(f)(0, 1) * sb.slice(f)(0, 1)) <
                  1e-12);
    }
}

TEST_CASE("y-branch splits, loses the antisymmetric combination") {
    const ModelPtr y = y_branch();
    CHECK(y->ports().size() == 3);
    const SMatrix s = y->evaluate(band(1));
    const auto& m = s.slice(0);
    const double a = 1.0 / std::sqrt(2.0);
    CHECK(m(1, 0) == Complex(a));  // stem -> each arm
    CHECK(m(2, 0) == Complex(a));
    CHECK(m(0, 1) == Complex(a));  // arm -> stem
    CHECK(m(1, 2) == Complex(0.0));  // no arm-to-arm path
    CHECK(max_singular_value(s)[0] == doctest::Approx(1.0).epsilon(1e-14));

    // splitter direction preserves power; equal-and-opposite arm drive is lost
    Eigen::Vector3cd stem_in(1.0, 0.0, 0.0);
    CHECK((m * stem_in).squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
    Eigen::Vector3cd anti(0.0, a, -a);
    CHECK((m * anti).squaredNorm() == doctest::Approx(0.0).epsilon(1e-14));

    CHECK(is_reciprocal(s, 1e-15));
}

TEST_CASE("directional coupler is a lossless two-path mixer") {
    const double coupling = 0.3;
    const SMatrix s = directional_coupler(coupling)->evaluate(band(1));
    const auto& m = s.slice(0);
    const double t = std::sqrt(1.0 - coupling);
    CHECK(m(2, 0) == Complex(t));                       // n1 -> n3 through
    CHECK(m(3, 1) == Complex(t));                       // n2 -> n4 through
    CHECK(m(3, 0) == Complex(0.0, std::sqrt(coupling)));  // n1 -> n4 cross
    CHECK(m(2, 1) == Complex(0.0, std::sqrt(coupling)));  // n2 -> n3 cross
    CHECK(m(1, 0) == Complex(0.0));                     // same-side isolation
    CHECK((m.adjoint() * m - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-14);
    CHECK(is_reciprocal(s, 1e-15));
    CHECK_THROWS_AS(directional_coupler(-0.1), ParamError);
    CHECK_THROWS_AS(directional_coupler(1.1), ParamError);
}

TEST_CASE("grating coupler parabolic insertion loss") {
    const double lc = 1.55e-6, peak = 3.0, bw = 35e-9;
    const ModelPtr gc = grating_coupler(lc, peak, bw);
    auto il_db_at = [&](double lambda) {
        const SMatrix s = gc->evaluate(FrequencyGrid({wavelength_to_frequency(lambda)}));
        return -20.0 * std::log10(std::abs(s.slice(0)(0, 1)));
    };
    CHECK(il_db_at(lc) == doctest::Approx(peak).epsilon(1e-12));
    CHECK(il_db_at(lc + bw / 2) == doctest::Approx(peak + 1.0).epsilon(1e-9));
    CHECK(il_db_at(lc - bw / 2) == doctest::Approx(peak + 1.0).epsilon(1e-9));
    CHECK(il_db_at(lc + bw) == doctest::Approx(peak + 4.0).epsilon(1e-9));

    const SMatrix s = gc->evaluate(band());
    CHECK(s.slice(0)(0, 0) == Complex(0.0));
    CHECK(is_reciprocal(s, 1e-15));
    CHECK_THROWS_AS(grating_coupler(1.55e-6, -1.0, 35e-9), ParamError);
    CHECK_THROWS_AS(grating_coupler(1.55e-6, 3.0, 0.0), ParamError);
}

TEST_CASE("half ring couples the bus to a propagating half arc") {
    const double radius = 10e-6, coupling = 0.1;
    WaveguideParams wp;
    wp.loss_db_per_m = 0.0;
    const ModelPtr hr = half_ring(radius, coupling, wp);
    const double lambda = 1.55e-6;
    const SMatrix s = hr->evaluate(FrequencyGrid({wavelength_to_frequency(lambda)}));
    const auto& m = s.slice(0);

    const double t = std::sqrt(1.0 - coupling);
    const double half_arc = pi * radius;
    const Complex phi =
        std::polar(1.0, 2.0 * pi * effective_index(wp, lambda) * half_arc / lambda);
    CHECK(std::abs(m(1, 0) - Complex(t)) < 1e-15);            // bus through
    CHECK(std::abs(m(3, 2) - t * phi) < 1e-14);               // arc through
    CHECK(std::abs(m(3, 0) - Complex(0, std::sqrt(coupling)) * phi) < 1e-14);
    CHECK(std::abs(m(2, 1) - Complex(0, std::sqrt(coupling))) < 1e-15);
    CHECK(std::abs(m(2, 0)) == 0.0);  // same-side isolation

    // lossless half ring is unitary
    CHECK((m.adjoint() * m - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-14);
    // With loss, every path through the arc shrinks, but driving the near bus
    // port stays lossless: both its exits sit at the coupling point itself.
    const SMatrix lossy = half_ring(radius, coupling)->evaluate(band());
    CHECK(max_singular_value(lossy).maxCoeff() <= 1.0 + 1e-12);
    for (Index f = 0; f < lossy.grid().size(); ++f) {
        CHECK(lossy.slice(f).col(3).norm() < 1.0);  // far arc end: attenuated
        CHECK(lossy.slice(f).col(1).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(is_reciprocal(lossy, 1e-15));

    CHECK_THROWS_AS(half_ring(0.5e-6, 0.1), ParamError);   // radius below range
    CHECK_THROWS_AS(half_ring(2e-3, 0.1), ParamError);     // radius above range
    CHECK_THROWS_AS(half_ring(10e-6, 1.5), ParamError);
}

TEST_CASE("crossover swaps with parasitic leakage") {
    const SMatrix ideal = crossover()->evaluate(band(1));
    CHECK(ideal.slice(0)(3, 0) == Complex(1.0));
    CHECK(ideal.slice(0)(2, 1) == Complex(1.0));
    CHECK(ideal.slice(0)(2, 0) == Complex(0.0));

    const double ct = 0.04;
    const SMatrix leaky = crossover(ct)->evaluate(band(1));
    const auto& m = leaky.slice(0);
    CHECK(m(3, 0) == Complex(std::sqrt(1.0 - ct)));
    CHECK(m(2, 0) == Complex(0.0, std::sqrt(ct)));
    CHECK((m.adjoint() * m - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-14);
    CHECK_THROWS_AS(crossover(-0.01), ParamError);
}

TEST_CASE("terminator absorbs everything") {
    const SMatrix s = terminator()->evaluate(band());
    CHECK(s.n_ports() == 1);
    for (Index f = 0; f < s.n_freqs(); ++f) CHECK(s.slice(f)(0, 0) == Complex(0.0));
}

TEST_CASE("waveguide parameter validation") {
    WaveguideParams p;
    p.length = -1e-6;
    CHECK_THROWS_AS(waveguide(p), ParamError);
    p.length = 2.0;  // above 1 m
    CHECK_THROWS_AS(waveguide(p), ParamError);
    p.length = 1e-6;
    p.loss_db_per_m = -1.0;
    CHECK_THROWS_AS(waveguide(p), ParamError);
}

TEST_CASE("sparam text round trip is bit-exact") {
    const FrequencyGrid g = FrequencyGrid::uniform(1.8e14, 2.1e14, 6);
    SMatrix s(g, {"left", "right"});
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Index f = 0; f < g.size(); ++f)
        for (Index i = 0; i < 2; ++i)
            for (Index j = 0; j < 2; ++j) s.slice(f)(i, j) = Complex(u(rng), u(rng));

    std::stringstream buf;
    write_sparam(buf, s);
    const SMatrix back = read_sparam(buf);
    CHECK(back.ports() == s.ports());
    CHECK((back.grid().points() - g.points()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(bitwise_equal(back, s));
}

TEST_CASE("sparam reader reports malformed input with line numbers") {
    auto read_text = [](const std::string& text) {
        std::istringstream in(text);
        return read_sparam(in);
    };
    CHECK_THROWS_AS(read_text(""), ParseError);
    CHECK_THROWS_AS(read_text("sparam v2 ports=1 names=a\n1e14 0 0\n"), ParseError);
    CHECK_THROWS_AS(read_text("sparam v1 ports=2 names=a\n"), ParseError);  // name count
    CHECK_THROWS_AS(read_text("sparam v1 ports=1 names=a\n"), ParseError);  // no rows
    CHECK_THROWS_AS(read_text("sparam v1 ports=1 names=a\n1e14 0\n"), ParseError);
    CHECK_THROWS_AS(read_text("sparam v1 ports=1 names=a\n1e14 0 junk\n"), ParseError);
    CHECK_THROWS_AS(read_text("sparam v1 ports=1 names=a\n2e14 0 0\n1e14 0 0\n"),
                    ParseError);
    CHECK_THROWS_AS(read_text("sparam v1 ports=1 names=a\n-1e14 0 0\n"), ParseError);

    try {
        read_text("sparam v1 ports=1 names=a\n1e14 0 0\nbogus row here\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    // comments and blank lines are fine anywhere
    const SMatrix ok = read_text(
        "# table\n\nsparam v1 ports=1 names=a\n# row next\n1e14 0.5 -0.25\n");
    CHECK(ok.slice(0)(0, 0) == Complex(0.5, -0.25));
}

TEST_CASE("file-backed model interpolates and refuses extrapolation") {
    TempDir tmp;
    const std::string path = (tmp.path / "dev.sparam").string();
    const FrequencyGrid g = FrequencyGrid::uniform(1.8e14, 2.0e14, 3);
    SMatrix s(g, {"bus.in", "bus.out"});  // dotted names get mangled to pins
    for (Index f = 0; f < 3; ++f) {
        s.slice(f)(0, 1) = Complex(0.1 * static_cast<double>(f + 1), 0.0);
        s.slice(f)(1, 0) = s.slice(f)(0, 1);
    }
    write_sparam_file(path, s);

    const ModelPtr dev = load_sparam_file(path);
    CHECK(dev->kind() == "sparam_file");
    CHECK(dev->ports() == std::vector<std::string>{"bus_in", "bus_out"});

    const SMatrix nodes = dev->evaluate(g);
    CHECK(bitwise_equal(nodes, s.relabeled({"bus_in", "bus_out"})));

    const SMatrix mid = dev->evaluate(FrequencyGrid({0.5 * (g[0] + g[1])}));
    CHECK(std::abs(mid.slice(0)(0, 1) - Complex(0.15, 0.0)) < 1e-15);

    CHECK_THROWS_AS(dev->evaluate(FrequencyGrid({2.05e14})), RangeError);
    CHECK_THROWS_AS(load_sparam_file((tmp.path / "missing.sparam").string()), Error);
}

TEST_CASE("every analytic model is reciprocal on a random grid") {
    const FrequencyGrid g = band(9);
    for (const ModelPtr& m :
         {waveguide(120e-6), y_branch(), directional_coupler(0.37),
          grating_coupler(1.54e-6, 2.0, 40e-9), half_ring(12e-6, 0.2), crossover(0.08),
          terminator()})
        CHECK(is_reciprocal(m->evaluate(g), 1e-15));
}

TEST_CASE("every analytic model is passive on a random grid") {
    const FrequencyGrid g = band(9);
    for (const ModelPtr& m :
         {waveguide(120e-6), y_branch(), directional_coupler(0.37),
          grating_coupler(1.54e-6, 2.0, 40e-9), half_ring(12e-6, 0.2), crossover(0.08),
          terminator()})
        CHECK(max_singular_value(m->evaluate(g)).maxCoeff() <= 1.0 + 1e-12);
}
