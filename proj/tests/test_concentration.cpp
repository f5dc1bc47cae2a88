#include <cmath>

#include "doctest.h"
#include "relaycap/concentration.hpp"

using namespace relaycap;

namespace {
GainBounds unit_gains() {
    return derive_constants(NetworkConfig::uniform_gains(2, 4, 0.01, 1.0));
}
}  // namespace

TEST_CASE("P1 lower bound approaches the decoupled limit") {
    const GainBounds g = unit_gains();
    // K = M^3 along a growing sequence; corrections decay like 1/sqrt(M)
    const SinrInterval far = sinr_interval(Protocol::P1, 1e12, 1e36, 1.0, g, 0.01);
    CHECK(far.lower == doctest::Approx(0.604697).epsilon(1e-4));
    CHECK(far.upper == doctest::Approx(0.604697).epsilon(1e-4));
    const SinrInterval mid = sinr_interval(Protocol::P1, 1e6, 1e18, 1.0, g, 0.01);
    CHECK(std::abs(mid.lower - 0.604697) > std::abs(far.lower - 0.604697));
}

TEST_CASE("numerator clamp zeroes the lower bound at large x") {
    const GainBounds g = unit_gains();
    // 1 - (8/(C pi)) (M/sqrt(K)) x < 0
    const double x = 10.0;
    const SinrInterval iv = sinr_interval(Protocol::P1, 8, 64, x, g, 0.01);
    CHECK(iv.lower == 0.0);
    CHECK(iv.upper > 0.0);
}

TEST_CASE("failure bound hand value at x = 1, M = K = 2") {
    const GainBounds g = unit_gains();
    const SinrInterval iv = sinr_interval(Protocol::P1, 2, 2, 1.0, g, 0.01);
    CHECK(iv.fail_prob_bound ==
          doctest::Approx(302.0 * 4.0 * 2.0 * std::exp(-g.delta_p1)).epsilon(1e-12));
    const SinrInterval iv2 = sinr_interval(Protocol::P2, 2, 2, 1.0, g, 0.01);
    CHECK(iv2.fail_prob_bound ==
          doctest::Approx(814.0 * 4.0 * 8.0 * std::exp(-g.delta_p2)).epsilon(1e-12));
}

TEST_CASE("interval preconditions are enforced") {
    const GainBounds g = unit_gains();
    CHECK_THROWS_AS(sinr_interval(Protocol::P1, 1, 8, 1.0, g, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(sinr_interval(Protocol::P1, 4, 1, 1.0, g, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(sinr_interval(Protocol::P1, 4, 8, 0.5, g, 0.01), std::invalid_argument);
}

TEST_CASE("intervals nest and the failure bound decays in x") {
    const GainBounds g = unit_gains();
    for (Protocol p : {Protocol::P1, Protocol::P2}) {
        double prev_l = -1.0, prev_u = 1e300, prev_f = 1e300;
        bool first = true;
        for (double x = 1.0; x <= 32.0; x *= 1.3) {
            const SinrInterval iv = sinr_interval(p, 8, 512, x, g, 0.01);
            CHECK(iv.lower <= iv.upper);
            if (!first) {
                CHECK(iv.lower <= prev_l + 1e-15);
                CHECK(iv.upper >= prev_u - 1e-15);
                CHECK(iv.fail_prob_bound <= prev_f + 1e-15);
            }
            prev_l = iv.lower;
            prev_u = iv.upper;
            prev_f = iv.fail_prob_bound;
            first = false;
        }
    }
}

TEST_CASE("component bounds carry the right constants") {
    GainBounds g;
    g.C_lo = g.C_hi = 1.0;
    g.c_lo = g.c_hi = 1.0;
    g.Csn_lo = g.Csn_hi = 1.0;

    CHECK(component_tail_bound(TailTerm::S4Chernoff, 4, 16, 2.0, g).bound ==
          doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(component_tail_bound(TailTerm::S31, 4, 16, 1.0, g).exponent_rate ==
          doctest::Approx(0.125));
    CHECK(component_tail_bound(TailTerm::T32, 4, 16, 1.0, g).exponent_rate ==
          doctest::Approx(0.39685).epsilon(1e-4));
    CHECK(component_tail_bound(TailTerm::S1, 4, 16, 1.0, g).exponent_rate ==
          doctest::Approx(0.5));
    CHECK(component_tail_bound(TailTerm::S322, 4, 16, 1.0, g).exponent_rate ==
          doctest::Approx(std::pow(2.0, -10.0 / 21.0) * 0.5).epsilon(1e-12));
    CHECK(component_tail_bound(TailTerm::S4, 4, 16, 1.0, g).exponent_rate ==
          doctest::Approx(0.25));
    // S321 prefactor counts K (M-1)^2 / M inner terms (times 64 (K-1))
    const double b = component_tail_bound(TailTerm::S321, 3, 16, 1.0, g).bound;
    CHECK(b == doctest::Approx(64.0 * 15.0 * 16.0 * 4.0 / 3.0 *
                               std::exp(-std::pow(2.0, -10.0 / 21.0) * 0.5)));
    CHECK_THROWS_AS(component_tail_bound(TailTerm::S321, 4, 16, 0.5, g), std::invalid_argument);
}

TEST_CASE("Chernoff S4 reference is tighter than the truncation form") {
    GainBounds g;
    g.C_lo = g.C_hi = 1.0;
    g.c_lo = g.c_hi = 1.0;
    for (double x = 1.0; x <= 12.0; x += 0.5) {
        const double chern = component_tail_bound(TailTerm::S4Chernoff, 4, 64, x, g).bound;
        const double trunc = component_tail_bound(TailTerm::S4, 4, 64, x, g).bound;
        CHECK(chern <= trunc);
    }
}

TEST_CASE("refined interval is contained in the single-parameter interval") {
    const GainBounds g = unit_gains();
    for (double x : {1.0, 2.0, 4.0, 8.0}) {
        for (double mk : {4.0, 8.0}) {
            const double M = mk, K = mk * mk * mk;
            RefinedDeviations xs;
            xs.x1 = xs.x2 = xs.x31 = xs.x321 = xs.x322 = xs.x4 = x;
            const SinrInterval ref = sinr_interval_refined_p1(M, K, xs, g, 0.01);
            const SinrInterval base = sinr_interval(Protocol::P1, M, K, x, g, 0.01);
            CHECK(ref.lower >= base.lower - 1e-12);
            CHECK(ref.upper <= base.upper + 1e-12);
            // the full assembly never exceeds the 302 K^2 M form
            CHECK(ref.fail_prob_bound <= base.fail_prob_bound + 1e-12);
        }
    }
}

TEST_CASE("refined failure bound vanishes as all deviations grow") {
    const GainBounds g = unit_gains();
    RefinedDeviations xs;
    xs.x1 = xs.x2 = xs.x31 = xs.x321 = xs.x322 = xs.x4 = 1e12;
    CHECK(refined_p1_fail_bound(6, 36, xs, g) < 1e-30);
}
