#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "relaycap/af.hpp"

using namespace relaycap;
using af::AfParams;
using af::cplx;

TEST_CASE("MP density support and atom") {
    const AfParams unit{1.0, 1.0, 0.01};
    const af::DensityCurve mp1 = af::mp_density(unit);
    CHECK(mp1.support.first == doctest::Approx(0.0));
    CHECK(mp1.support.second == doctest::Approx(4.0));
    CHECK(mp1.atom_at_zero == 0.0);
    CHECK(mp1.total_mass() == doctest::Approx(1.0).epsilon(1e-3));

    const AfParams two{2.0, 1.0, 0.01};
    const af::DensityCurve mp2 = af::mp_density(two);
    CHECK(mp2.support.first == doctest::Approx(0.08579).epsilon(1e-4));
    CHECK(mp2.support.second == doctest::Approx(2.91421).epsilon(1e-4));
    for (double v : mp2.values) CHECK(v >= 0.0);

    const AfParams half{0.5, 1.0, 0.01};
    CHECK(af::mp_density(half).atom_at_zero == doctest::Approx(0.5));
    CHECK(af::mp_density(half).total_mass() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("T density support and atom") {
    const AfParams unit{1.0, 1.0, 0.01};
    const af::DensityCurve ft = af::ft_density(unit);
    CHECK(ft.support.first == doctest::Approx(0.0));
    CHECK(ft.support.second == doctest::Approx(0.8));
    CHECK(ft.atom_at_zero == 0.0);
    CHECK(ft.total_mass() == doctest::Approx(1.0).epsilon(1e-3));

    const AfParams two{2.0, 1.0, 0.01};
    CHECK(af::ft_density(two).atom_at_zero == doctest::Approx(0.5));
    CHECK(af::ft_density(two).total_mass() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("quartic coefficients at z = i, beta = d = 1") {
    const auto c = af::quartic_coeffs(cplx{0.0, 1.0}, AfParams{1.0, 1.0, 0.01});
    CHECK(std::abs(c[0] - cplx{2.0, 0.0}) < 1e-14);
    CHECK(std::abs(c[1] - cplx{1.0, -1.0}) < 1e-14);
    CHECK(std::abs(c[2] - cplx{1.0, -2.0}) < 1e-14);
    CHECK(std::abs(c[3] - cplx{-1.0, 0.0}) < 1e-14);
}

TEST_CASE("quartic coefficients are conjugate at conjugate z (via -z*)") {
    // rational functions of z with real parameters: coefficients at the
    // reflected point are the conjugates
    const AfParams p{1.7, 0.8, 0.01};
    const cplx z{0.4, 0.9};
    const auto a = af::quartic_coeffs(z, p);
    // conj(z) has negative imaginary part: evaluate the rational functions
    // directly instead of calling the guarded op
    const double b = p.beta, d2 = p.d * p.d;
    const cplx zc = std::conj(z);
    const std::array<cplx, 4> expect = {(2.0 * zc - b + 1.0) / zc,
                                        (zc - b + 3.0 - b / d2) / zc,
                                        (2.0 * zc - b + 1.0 - b / d2) / (zc * zc),
                                        1.0 / (zc * zc)};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(std::conj(a[static_cast<std::size_t>(i)]) -
                                               expect[static_cast<std::size_t>(i)]) < 1e-14);
}

TEST_CASE("scaled quartic approaches the beta -> infinity quadratic") {
    const cplx z{0.5, 0.3};
    const double d = 1.3;
    const double c = 1.0 + 1.0 / (d * d);
    const double beta = 1e9;
    const auto a = af::quartic_coeffs(z, AfParams{beta, d, 0.01});
    CHECK(std::abs(a[0] / beta - (-1.0 / z)) < 1e-7);
    CHECK(std::abs(a[1] / beta - (-c / z)) < 1e-7);
    CHECK(std::abs(a[2] / beta - (-c / (z * z))) < 1e-7);
    CHECK(std::abs(a[3] / beta) < 1e-7);
}

TEST_CASE("solve_quartic: repeated and random roots") {
    // (x^2 + 1)^2 = x^4 + 2 x^2 + 1
    const auto rep = af::solve_quartic({cplx{}, cplx{2.0, 0.0}, cplx{}, cplx{1.0, 0.0}});
    int plus = 0, minus = 0;
    for (const cplx& r : rep) {
        CHECK(std::abs(r.real()) < 2e-5);  // double root: O(sqrt(eps)) accuracy
        if (r.imag() > 0) ++plus;
        if (r.imag() < 0) ++minus;
        CHECK(std::abs(std::abs(r.imag()) - 1.0) < 2e-5);
    }
    CHECK(plus == 2);
    CHECK(minus == 2);

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::array<cplx, 4> roots;
        bool separated = true;
        for (auto& r : roots) r = cplx{u(gen), u(gen)};
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (std::abs(roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)]) < 0.1)
                    separated = false;
        if (!separated) continue;
        // expand to coefficients
        std::array<cplx, 5> poly{cplx{1.0, 0.0}};
        int deg = 0;
        for (const cplx& r : roots) {
            std::array<cplx, 5> next{};
            for (int i = 0; i <= deg; ++i) {
                next[static_cast<std::size_t>(i + 1)] += poly[static_cast<std::size_t>(i)];
                next[static_cast<std::size_t>(i)] -= r * poly[static_cast<std::size_t>(i)];
            }
            poly = next;
            ++deg;
        }
        // poly holds low-to-high: x^4 coeff is poly[4] = 1
        const std::array<cplx, 4> coeffs = {poly[3], poly[2], poly[1], poly[0]};
        const auto solved = af::solve_quartic(coeffs);
        for (const cplx& r : roots) {
            double best = 1e300;
            for (const cplx& s : solved) best = std::min(best, std::abs(s - r));
            CHECK(best < 1e-9);
        }
    }
}

TEST_CASE("coefficient perturbations stay benign on separated roots") {
    const std::array<cplx, 4> coeffs = {cplx{0.3, -0.2}, cplx{-1.5, 0.4}, cplx{0.2, 0.9},
                                        cplx{0.7, -0.3}};
    const auto base = af::solve_quartic(coeffs);
    std::array<cplx, 4> bumped = coeffs;
    bumped[2] += cplx{1e-12, -1e-12};
    const auto moved = af::solve_quartic(bumped);
    for (int i = 0; i < 4; ++i) {
        double best = 1e300;
        for (int j = 0; j < 4; ++j)
            best = std::min(best, std::abs(base[static_cast<std::size_t>(i)] -
                                           moved[static_cast<std::size_t>(j)]));
        CHECK(best < 1e-5);
    }
}

TEST_CASE("atom integral constant") {
    CHECK(af::atom_integral_constant(4.0) == doctest::Approx(0.375).epsilon(1e-12));
    // combines with the atom to the beta-independent shift
    for (double beta : {0.5, 1.0, 2.0, 4.0}) {
        const double lhs = -std::max(0.0, 1.0 - 1.0 / beta) + af::atom_integral_constant(beta);
        CHECK(lhs == doctest::Approx(-(beta - 1.0) / (2.0 * beta)).epsilon(1e-12));
    }
}

TEST_CASE("selected stieltjes branch satisfies the fixed point") {
    for (double beta : {0.5, 1.0, 2.0, 4.0}) {
        const AfParams p{beta, 1.0, 0.01};
        const double xmax = af::support_upper_bound(p);
        for (double frac : {0.1, 0.3, 0.6, 0.9}) {
            const cplx z{frac * xmax, 1e-3};
            const af::StieltjesPoint pt = af::stieltjes_G(z, p);
            CHECK(pt.residual <= 1e-6);
            const cplx ghat = (beta - 1.0) / z + beta * pt.G;
            CHECK(ghat.imag() > 0.0);
            // the rejected candidate is an order of magnitude worse on
            // bulk points
            const auto roots = af::solve_quartic(af::quartic_coeffs(z, p));
            double worst = 0.0;
            for (const cplx& r : roots) {
                const cplx cand{r.real(), std::abs(r.imag())};
                if (std::abs(cand - ghat) < 1e-6) continue;
                const cplx g = (cand - (beta - 1.0) / z) / beta;
                worst = std::max(worst, af::fixedpoint_residual(g, z, p));
            }
            if (worst > 0) CHECK(worst >= 10.0 * std::max(pt.residual, 1e-12));
        }
    }
}

TEST_CASE("large beta matches the quadratic-limit transform") {
    const double d = 1.0;
    const AfParams p{1e4, d, 0.01};
    const double c = 1.0 + 1.0 / (d * d);
    for (double x : {0.5, 1.0, 1.5}) {
        const cplx z{x, 1e-3};
        const af::StieltjesPoint pt = af::stieltjes_G(z, p);
        const cplx ghat = (p.beta - 1.0) / z + p.beta * pt.G;
        // C+ root of z g^2 + z c g + c = 0
        const cplx disc = std::sqrt(z * z * c * c - 4.0 * z * c);
        cplx g1 = (-z * c + disc) / (2.0 * z);
        cplx g2 = (-z * c - disc) / (2.0 * z);
        const cplx ref = g1.imag() > 0 ? g1 : g2;
        CHECK(std::abs(ghat - ref) < 1e-3);
    }
}

TEST_CASE("support bound hand values") {
    CHECK(af::support_upper_bound({1.0, 1.0, 0.01}) == doctest::Approx(3.2));
    const double beta = 2.7;
    CHECK(af::support_upper_bound({beta, 1e8, 0.01}) ==
          doctest::Approx(std::pow(1.0 + std::sqrt(beta), 2)).epsilon(1e-10));
    for (double b : {0.1, 1.0, 7.0}) CHECK(af::support_upper_bound({b, 0.7, 0.01}) > 0.0);
}

TEST_CASE("limiting density: mass, positivity, smoothing stability") {
    for (double beta : {0.5, 2.0}) {
        const AfParams p{beta, 1.0, 0.01};
        const af::DensityCurve c = af::limiting_density(p, -1.0, 900);
        for (double v : c.values) CHECK(v >= 0.0);
        CHECK(c.total_mass() == doctest::Approx(1.0).epsilon(1e-3));
        if (beta > 1.0) {
            CHECK(c.atom_at_zero == doctest::Approx(1.0 - 1.0 / beta));
            CHECK(c.trapezoid_mass() == doctest::Approx(1.0 / beta).epsilon(2e-3));
        } else {
            CHECK(c.atom_at_zero == 0.0);
        }
    }
}

TEST_CASE("capacity integrals") {
    // dual quadrature for the beta -> infinity limit: theta substitution vs
    // sqrt substitution in the x domain
    const double d = 1.0, sigma2 = 0.01;
    const double snr = d * d / ((d * d + 1.0) * sigma2);
    const double v1 = af::capacity_infty(d, sigma2);
    auto integrand = [&](double t) {
        // u = t^2: (1/4pi) sqrt(4/u-1) du -> (1/2pi) sqrt(4 - t^2) dt
        return std::sqrt(std::max(0.0, 4.0 - t * t)) *
               std::log2(1.0 + snr * t * t) / (2.0 * std::numbers::pi);
    };
    const double v2 = af::adaptive_simpson(integrand, 0.0, 2.0, 1e-9);
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-6));
    CHECK(af::capacity_infty(1.0, 1e9) < 1e-6);
    CHECK(af::capacity_infty(2.0, sigma2) > v1);  // larger d raises the SNR

    // finite-beta capacity is positive and grows with beta
    const double c_half = af::capacity_beta({0.5, 1.0, 0.01});
    const double c_one = af::capacity_beta({1.0, 1.0, 0.01});
    CHECK(c_half > 0.0);
    CHECK(c_one > c_half);
}

TEST_CASE("scaled limit density: support and normalization") {
    CHECK(af::limit_density_infty(-0.5, 1.0) == 0.0);
    CHECK(af::limit_density_infty(2.5, 1.0) == 0.0);  // support [0, 2] at d = 1
    CHECK(af::limit_density_infty(1.0, 1.0) > 0.0);
    for (double d : {0.7, 1.0, 2.0}) {
        const double hi = 4.0 / (1.0 + 1.0 / (d * d));
        // start just off u = 0: the density function is defined as 0 at the
        // point x = 0 itself while its x -> 0 limit diverges
        auto sub = [&](double u) { return 2.0 * u * af::limit_density_infty(u * u, d); };
        const double mass = af::adaptive_simpson(sub, 1e-9, std::sqrt(hi), 1e-9);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("huge-beta capacities bracket the limit") {
    const double cinf = af::capacity_infty(1.0, 0.01);
    const double c3 = af::capacity_beta({1e3, 1.0, 0.01});
    const double c4 = af::capacity_beta({1e4, 1.0, 0.01});
    CHECK(c3 <= c4 + 1e-2);
    CHECK(c4 <= cinf + 1e-2);
    CHECK(std::abs(c4 - cinf) <= 1e-2);
    CHECK(std::abs(c3 - cinf) <= 1e-2);
}
