#include <cmath>
#include <complex>

#include <numbers>
#include "doctest.h"
#include "relaycap/ldp.hpp"
#include "relaycap/rng.hpp"

using namespace relaycap;
using relaycap::ldp::BoundPair;
using relaycap::ldp::TailBound;

TEST_CASE("hoeffding hand values") {
    CHECK(ldp::hoeffding(1, {{0.0, 1.0}}, 0.5).bound == doctest::Approx(std::exp(-0.5)));
    CHECK(ldp::hoeffding(1, {{0.0, 1.0}}, 0.0).bound == doctest::Approx(1.0));
    std::vector<std::pair<double, double>> unit(10, {0.0, 1.0});
    CHECK(ldp::hoeffding(10, unit, 0.1).bound == doctest::Approx(std::exp(-0.2)));
    CHECK_THROWS_AS(ldp::hoeffding(0, {}, 0.1), std::invalid_argument);
}

TEST_CASE("maurer hand values") {
    CHECK(ldp::maurer(1, {1.0}, 0.0).bound == doctest::Approx(1.0));
    CHECK(ldp::maurer(1, {1.0}, 1.0).bound == doctest::Approx(std::exp(-0.5)));
    std::vector<double> m2(4, 1.5), m2x2(4, 3.0);
    const double r1 = ldp::maurer(4, m2, 0.7).exponent_rate;
    const double r2 = ldp::maurer(4, m2x2, 0.7).exponent_rate;
    CHECK(r1 == doctest::Approx(2.0 * r2));
}

TEST_CASE("truncation bound hand values") {
    CHECK(ldp::truncation_bound(4, 1, 1, 1, 1, 27.0).bound ==
          doctest::Approx(8.0 * std::exp(-4.5)).epsilon(1e-12));
    const TailBound vac = ldp::truncation_bound(4, 1, 1, 1, 1, 8.0);
    CHECK(vac.bound == doctest::Approx(8.0 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(vac.bound > 1.0);  // vacuous but valid, returned un-clamped
    CHECK_THROWS_AS(ldp::truncation_bound(4, -1, 1, 1, 1, 8.0), std::invalid_argument);
}

TEST_CASE("complex truncation bound: prefactor and exponent factors") {
    // prefactor doubles relative to the real case and the exponent picks
    // up 2^{-beta/(beta+2)}
    const TailBound c = ldp::truncation_bound_complex(1, 1, 1, 1, 1, 27.0);
    const double expected = 8.0 * std::exp(-0.5 * std::pow(2.0, -1.0 / 3.0) * 9.0);
    CHECK(c.bound == doctest::Approx(expected).epsilon(1e-12));
    const TailBound r = ldp::truncation_bound(1, 1, 1, 1, 1, 27.0);
    CHECK(c.bound / r.bound ==
          doctest::Approx(2.0 * std::exp(-0.5 * 9.0 * (std::pow(2.0, -1.0 / 3.0) - 1.0))));
}

TEST_CASE("nonnegative truncation bound hand values") {
    CHECK(ldp::truncation_bound_nonneg(1, 1, 1, 1, 1, 1, 1.0).bound ==
          doctest::Approx(3.0 * std::exp(-0.5)).epsilon(1e-12));
    // huge second moments drive the exponent rate to zero
    CHECK(ldp::truncation_bound_nonneg(1, 1, 1, 1, 1, 1e12, 1.0).exponent_rate ==
          doctest::Approx(0.5e-12).epsilon(1e-6));
    // x below the validity threshold is rejected
    CHECK_THROWS_AS(ldp::truncation_bound_nonneg(1, 1, 1, 1, 1, 1, 0.5, 0.9),
                    std::invalid_argument);
}

TEST_CASE("bounds are nonincreasing on their validity region") {
    double prev_r = 1e30, prev_c = 1e30, prev_n = 1e30;
    for (double x = 1.0; x < 40.0; x += 0.25) {
        const double r = ldp::truncation_bound(10, 2, 1, 0.5, 1.3, x).bound;
        const double c = ldp::truncation_bound_complex(10, 2, 1, 0.5, 1.3, x).bound;
        const double n = ldp::truncation_bound_nonneg(10, 2, 1, 0.5, 1.3, 2.0, x).bound;
        CHECK(r <= prev_r);
        CHECK(c <= prev_c);
        CHECK(n <= prev_n);
        prev_r = r;
        prev_c = c;
        prev_n = n;
    }
}

TEST_CASE("validity threshold is x0^{(2+beta)/2}") {
    const TailBound t = ldp::truncation_bound(4, 1, 1, 2, 1, 10.0, 2.0);
    CHECK(t.valid_from == doctest::Approx(std::pow(2.0, 2.0)));
    CHECK_THROWS_AS(ldp::truncation_bound(4, 1, 1, 2, 1, 3.9, 2.0), std::invalid_argument);
}

TEST_CASE("union-bound combinators") {
    const BoundPair s = ldp::combine_sum({{1.0, 0.1}, {2.0, 0.2}});
    CHECK(s.c == doctest::Approx(3.0));
    CHECK(s.p == doctest::Approx(0.3));

    const BoundPair py = ldp::combine_pythagorean({3.0, 0.0}, {4.0, 0.0});
    CHECK(py.c == doctest::Approx(5.0));
    CHECK(py.p == doctest::Approx(0.0));

    const BoundPair lo = ldp::combine_mixed_lower({{5.0, 0.1}}, {{2.0, 0.2}});
    CHECK(lo.c == doctest::Approx(0.0));  // max[0, 2 - 5]
    CHECK(lo.p == doctest::Approx(0.3));
    const BoundPair lo2 = ldp::combine_mixed_lower({{1.0, 0.1}}, {{2.0, 0.2}});
    CHECK(lo2.c == doctest::Approx(1.0));

    const BoundPair up = ldp::combine_mixed_upper({{1.0, 0.1}}, {{2.0, 0.2}});
    CHECK(up.c == doctest::Approx(3.0));

    const BoundPair pr = ldp::combine_product({{2.0, 0.1}, {3.0, 0.2}});
    CHECK(pr.c == doctest::Approx(6.0));
    CHECK(pr.p == doctest::Approx(0.3));

    const BoundPair fr = ldp::combine_fraction({6.0, 0.1}, {2.0, 0.2});
    CHECK(fr.c == doctest::Approx(3.0));
    CHECK(fr.p == doctest::Approx(0.3));
    CHECK_THROWS_AS(ldp::combine_fraction({1.0, 0.1}, {0.0, 0.2}), std::invalid_argument);
}

TEST_CASE("empirical tails stay below the complex truncation bound") {
    const int N = 100;
    auto sampler = [&](std::uint64_t trial) {
        std::complex<double> s{};
        for (int n = 0; n < N; ++n) {
            const double mod = rng::exponential(11, trial, 2 * static_cast<std::uint64_t>(n));
            const double phase =
                2.0 * std::numbers::pi *
                rng::uniform01(11, trial, 2 * static_cast<std::uint64_t>(n) + 1);
            s += mod * std::polar(1.0, phase);
        }
        return std::abs(s) / std::sqrt(static_cast<double>(N));
    };
    auto bound = [&](double x) { return ldp::truncation_bound_complex(N, 1, 1, 1, 1, x); };
    std::vector<double> grid;
    for (double x = 1.0; x <= 8.0; x += 0.5) grid.push_back(x);
    const auto rep = ldp::empirical_tail_check(sampler, bound, grid, 100000);
    CHECK(rep.violations == 0);
}

TEST_CASE("tail check trivial cases") {
    auto zero = [](std::uint64_t) { return 0.0; };
    auto bound = [](double x) { return ldp::truncation_bound(1, 1, 1, 1, 1, x); };
    const auto rep = ldp::empirical_tail_check(zero, bound, {1.0, 2.0}, 1000);
    CHECK(rep.violations == 0);
    for (double e : rep.empirical) CHECK(e == 0.0);

    auto heavy = [](std::uint64_t t) { return static_cast<double>(t % 7); };
    auto one = [](double) { return TailBound{1.0, 0.0, 0.0, 1.0}; };
    CHECK(ldp::empirical_tail_check(heavy, one, {1.0, 5.0}, 1000).violations == 0);

    CHECK_THROWS_AS(ldp::empirical_tail_check(zero, bound, {1.0}, 999), std::invalid_argument);
}
