#include "picsim/smatrix.hpp"

#include <random>

#include "doctest.h"
#include "testutil.hpp"

using namespace picsim;

TEST_CASE("frequency grid construction and validation") {
    const FrequencyGrid g = FrequencyGrid::uniform(190e12, 200e12, 11);
    CHECK(g.size() == 11);
    CHECK(g[0] == 190e12);          // endpoints land exactly
    CHECK(g[10] == 200e12);
    CHECK(g[5] == doctest::Approx(195e12).epsilon(1e-15));

    CHECK_THROWS_AS(FrequencyGrid({2e14, 1e14}), ParamError);       // decreasing
    CHECK_THROWS_AS(FrequencyGrid({1e14, 1e14}), ParamError);       // not strict
    CHECK_THROWS_AS(FrequencyGrid({0.0, 1e14}), ParamError);        // non-positive
    CHECK_THROWS_AS(FrequencyGrid(Eigen::VectorXd()), ParamError);  // empty
    CHECK_THROWS_AS(FrequencyGrid::uniform(2e14, 1e14, 5), ParamError);
    CHECK_THROWS_AS(FrequencyGrid::uniform(1e14, 2e14, 0), ParamError);

    // single point requires equal endpoints
    CHECK(FrequencyGrid::uniform(1e14, 1e14, 1).size() == 1);
    CHECK_THROWS_AS(FrequencyGrid::uniform(1e14, 2e14, 1), ParamError);

    const FrequencyGrid seg = g.segment(3, 4);
    CHECK(seg.size() == 4);
    CHECK(seg[0] == g[3]);
    CHECK(seg[3] == g[6]);
    CHECK_THROWS_AS(g.segment(9, 5), IndexError);
}

TEST_CASE("wavelength and frequency conversions invert each other") {
    CHECK(wavelength_to_frequency(1.55e-6) == doctest::Approx(1.9341e14).epsilon(1e-4));
    CHECK(frequency_to_wavelength(wavelength_to_frequency(1.31e-6)) ==
          doctest::Approx(1.31e-6).epsilon(1e-15));
    const FrequencyGrid g = FrequencyGrid::uniform(1.8e14, 2.0e14, 3);
    CHECK(g.wavelength(0) == speed_of_light / 1.8e14);
}

TEST_CASE("smatrix shape, port lookup, and label rules") {
    const FrequencyGrid g = FrequencyGrid::uniform(1.9e14, 2.0e14, 4);
    SMatrix s(g, {"a", "b", "c"});
    CHECK(s.n_freqs() == 4);
    CHECK(s.n_ports() == 3);
    for (Index f = 0; f < 4; ++f) CHECK(s.slice(f).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.port_index("b") == 1);
    CHECK_THROWS_AS(s.port_index("missing"), UnknownPin);
    CHECK_THROWS_AS(SMatrix(g, {"a", "a"}), DuplicateName);
    CHECK_THROWS_AS(SMatrix(g, {"a", ""}), ParamError);

    const SMatrix r = s.relabeled({"x", "y", "z"});
    CHECK(r.port_index("z") == 2);
    CHECK_THROWS_AS(s.relabeled({"x"}), ArityMismatch);
}

namespace {

SMatrix random_smatrix(const FrequencyGrid& g, std::vector<std::string> ports,
                       std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SMatrix s(g, std::move(ports));
    for (Index f = 0; f < g.size(); ++f)
        for (Index i = 0; i < s.n_ports(); ++i)
            for (Index j = 0; j < s.n_ports(); ++j)
                s.slice(f)(i, j) = Complex(u(rng), u(rng));
    return s;
}

}  // namespace

TEST_CASE("interpolation hits stored points bit-exactly and is linear between") {
    const FrequencyGrid src = FrequencyGrid::uniform(1.8e14, 2.0e14, 5);
    const SMatrix s = random_smatrix(src, {"p", "q"}, 7);

    const SMatrix same = interpolate(s, src);
    CHECK(picsim::testutil::bitwise_equal(same, s));

    // midpoint of neighbours is their average
    const double mid = 0.5 * (src[1] + src[2]);
    const SMatrix m = interpolate(s, FrequencyGrid({mid}));
    const Eigen::MatrixXcd want = 0.5 * s.slice(1) + 0.5 * s.slice(2);
    CHECK((m.slice(0) - want).cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(interpolate(s, FrequencyGrid({1.7e14})), RangeError);
    CHECK_THROWS_AS(interpolate(s, FrequencyGrid({2.1e14})), RangeError);
}

TEST_CASE("interpolation commutes with port permutation") {
    const FrequencyGrid src = FrequencyGrid::uniform(1.8e14, 2.0e14, 9);
    const FrequencyGrid dst = FrequencyGrid::uniform(1.82e14, 1.97e14, 13);
    const SMatrix s = random_smatrix(src, {"a", "b", "c"}, 21);
    const std::vector<Index> order = {2, 0, 1};
    const SMatrix a = interpolate(permute_ports(s, order), dst);
    const SMatrix b = permute_ports(interpolate(s, dst), order);
    CHECK(picsim::testutil::max_abs_diff(a, b) == 0.0);
}

TEST_CASE("reciprocity check") {
    const FrequencyGrid g = FrequencyGrid::uniform(1.9e14, 1.95e14, 3);
    SMatrix wg(g, {"n1", "n2"});
    for (Index f = 0; f < 3; ++f) {
        wg.slice(f)(0, 1) = Complex(0.3, 0.4);
        wg.slice(f)(1, 0) = Complex(0.3, 0.4);
    }
    CHECK(is_reciprocal(wg, 1e-15));
    wg.slice(1)(1, 0) = Complex(0.3, 0.401);
    CHECK_FALSE(is_reciprocal(wg, 1e-6));
    CHECK(is_reciprocal(wg, 1e-2));
}

TEST_CASE("largest singular value") {
    const FrequencyGrid g({1.9e14});
    SMatrix ident(g, {"n1", "n2"});
    ident.slice(0)(0, 1) = ident.slice(0)(1, 0) = 1.0;
    CHECK(max_singular_value(ident)[0] == doctest::Approx(1.0).epsilon(1e-14));

    // 3x3 equal-split pattern: stem column norm exceeds 1 only if entries do
    SMatrix split(g, {"n1", "n2", "n3"});
    const double a = 1.0 / std::sqrt(2.0);
    split.slice(0)(0, 1) = split.slice(0)(1, 0) = a;
    split.slice(0)(0, 2) = split.slice(0)(2, 0) = a;
    CHECK(max_singular_value(split)[0] == doctest::Approx(1.0).epsilon(1e-14));

    const SMatrix empty(g, std::vector<std::string>{});
    CHECK_THROWS_AS(max_singular_value(empty), IndexError);
}

TEST_CASE("port permutation reorders data and labels together") {
    const FrequencyGrid g({1.9e14, 1.91e14});
    const SMatrix s = random_smatrix(g, {"a", "b", "c"}, 3);
    const SMatrix p = permute_ports(s, {1, 2, 0});
    CHECK(p.ports() == std::vector<std::string>{"b", "c", "a"});
    CHECK(p.slice(0)(0, 1) == s.slice(0)(1, 2));
    CHECK(p.slice(1)(2, 0) == s.slice(1)(0, 1));

    // applying the inverse permutation restores the original
    const SMatrix back = permute_ports(p, {2, 0, 1});
    CHECK(picsim::testutil::bitwise_equal(back, s));

    CHECK_THROWS_AS(permute_ports(s, {0, 1}), ArityMismatch);
    CHECK_THROWS_AS(permute_ports(s, {0, 0, 1}), IndexError);
}

TEST_CASE("frequency concatenation") {
    const SMatrix a = random_smatrix(FrequencyGrid({1e14, 2e14}), {"p", "q"}, 1);
    const SMatrix b = random_smatrix(FrequencyGrid({3e14}), {"p", "q"}, 2);
    const SMatrix all = concat_frequencies({a, b});
    CHECK(all.n_freqs() == 3);
    CHECK(all.grid()[2] == 3e14);
    CHECK((all.slice(1) - a.slice(1)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((all.slice(2) - b.slice(0)).cwiseAbs().maxCoeff() == 0.0);

    const SMatrix wrong_ports = random_smatrix(FrequencyGrid({4e14}), {"p", "r"}, 3);
    CHECK_THROWS_AS(concat_frequencies({a, wrong_ports}), GridMismatch);
    const SMatrix overlapping = random_smatrix(FrequencyGrid({1.5e14}), {"p", "q"}, 4);
    CHECK_THROWS_AS(concat_frequencies({a, overlapping}), ParamError);
    CHECK_THROWS_AS(concat_frequencies({}), ParamError);
}
