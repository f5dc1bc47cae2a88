#include "relaycap/concentration.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relaycap {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2Over16 = kPi * kPi / 16.0;

void require_interval_domain(double M, double K, double x) {
    if (M < 2) throw std::invalid_argument("sinr_interval: M >= 2 required");
    if (K < 2) throw std::invalid_argument("sinr_interval: K >= 2 required");
    if (x < 1) throw std::invalid_argument("sinr_interval: x >= 1 required");
}

double delta1(const GainBounds& g) { return std::min(1.0, 1.0 / (2.0 * g.C_hi * g.C_hi)); }
double delta2(const GainBounds& g) {
    return std::pow(2.0, -1.0 / 3.0) * std::min(1.0, 1.0 / (2.0 * g.C_hi * g.C_hi));
}
double delta31(const GainBounds& g) {
    return std::min(1.0, 1.0 / (8.0 * std::pow(g.C_hi, 4)));
}
double delta_t(const GainBounds& g) {
    return std::pow(2.0, -1.0 / 3.0) * std::min(1.0, 1.0 / (2.0 * g.C_hi * g.C_hi));
}
double delta32(const GainBounds& g) {
    return std::pow(2.0, -10.0 / 21.0) * std::min(1.0, 1.0 / (2.0 * g.C_hi * g.C_hi));
}
double delta4(const GainBounds& g) {
    return std::min(1.0, 1.0 / (4.0 * std::pow(g.c_hi, 4)));
}
}  // namespace

SinrInterval sinr_interval(Protocol protocol, double M, double K, double x,
                           const GainBounds& g, double sigma2) {
    require_interval_domain(M, K, x);
    const double C_lo2 = g.C_lo * g.C_lo, C_hi2 = g.C_hi * g.C_hi;
    const double c_lo2 = g.c_lo * g.c_lo, c_hi2 = g.c_hi * g.c_hi;
    const double Csn_lo2 = g.Csn_lo * g.Csn_lo, Csn_hi2 = g.Csn_hi * g.Csn_hi;
    const double root_m = std::sqrt(M);
    const double root_k = std::sqrt(K);

    SinrInterval out;
    out.x = x;
    switch (protocol) {
        case Protocol::P1: {
            const double pref_l = kPi2Over16 * (C_lo2 / Csn_hi2) * K / std::pow(M, 3);
            const double num_l =
                std::pow(std::max(0.0, 1.0 - (8.0 / (g.C_lo * kPi)) * (M / root_k) * x), 2);
            const double den_l = C_hi2 / Csn_hi2 + (3.0 / Csn_hi2) * (x / root_m) +
                                 (sigma2 / Csn_hi2) * (c_hi2 + x / root_k) + sigma2 / Csn_hi2;
            out.lower = pref_l * num_l / den_l;

            const double pref_u = kPi2Over16 * (C_hi2 / Csn_lo2) * K / std::pow(M, 3);
            const double num_u =
                std::pow(1.0 + (8.0 / (g.C_hi * kPi)) * (M / root_k) * x, 2);
            const double den_u =
                std::max(0.0, (C_lo2 / Csn_lo2) * (M - 1.0) / M - (3.0 / Csn_lo2) * (x / root_m)) +
                std::max(0.0, (sigma2 / Csn_lo2) * (c_hi2 - x / root_k)) + sigma2 / Csn_lo2;
            out.upper = pref_u * num_u / den_u;

            out.fail_prob_bound = 302.0 * K * K * M *
                                  std::exp(-g.delta_p1 * std::pow(x, 2.0 / 7.0));
            break;
        }
        case Protocol::P2: {
            const double min_root = std::min(root_m, root_k);
            const double pref_l = kPi2Over16 * (C_lo2 / Csn_hi2) * K / (M * M);
            const double num_l = std::pow(
                std::max(0.0, 1.0 - (8.0 / (g.C_lo * kPi)) * std::sqrt(M / K) * x),
                2);
            const double den_l = C_hi2 / Csn_hi2 + (4.0 / Csn_hi2) * (x / min_root) +
                                 (sigma2 / Csn_hi2) * (c_hi2 + 2.0 * x / root_k) +
                                 sigma2 / Csn_hi2;
            out.lower = pref_l * num_l / den_l;

            const double pref_u = kPi2Over16 * (C_hi2 / Csn_lo2) * K / std::pow(M, 3);
            const double num_u =
                std::pow(1.0 + (8.0 / (g.C_hi * kPi)) * std::sqrt(M / K) * x, 2);
            const double den_u =
                std::max(0.0,
                         (C_lo2 / Csn_lo2) * (M - 1.0) / M - (4.0 / Csn_lo2) * (x / min_root)) +
                std::max(0.0, (sigma2 / Csn_lo2) * (c_lo2 - 2.0 * x / root_k)) +
                sigma2 / Csn_lo2;
            out.upper = pref_u * num_u / den_u;

            out.fail_prob_bound = 814.0 * K * K * std::pow(M, 3) *
                                  std::exp(-g.delta_p2 * std::pow(x, 2.0 / 9.0));
            break;
        }
        default:
            throw std::invalid_argument("sinr_interval: cooperative protocols not covered");
    }
    return out;
}

ldp::TailBound component_tail_bound(TailTerm term, double M, double K, double x,
                                    const GainBounds& g) {
    if (K < 2 && term != TailTerm::S4Chernoff && term != TailTerm::S4 && term != TailTerm::S1)
        throw std::invalid_argument("component_tail_bound: K >= 2 required");
    if (x < 0) throw std::invalid_argument("component_tail_bound: x >= 0 required");
    ldp::TailBound t;
    switch (term) {
        case TailTerm::S1:
            t.exponent_rate = delta1(g);
            t.power = 2.0 / 3.0;
            t.bound = 6.0 * (K / M) *
                      std::exp(-t.exponent_rate * std::pow(x, t.power));
            break;
        case TailTerm::S2:
            t.exponent_rate = delta2(g);
            t.power = 2.0 / 3.0;
            t.bound = 8.0 * (K * (M - 1) / M) *
                      std::exp(-t.exponent_rate * std::pow(x, t.power));
            break;
        case TailTerm::S31:
            t.exponent_rate = delta31(g);
            t.power = 2.0 / 5.0;
            t.bound = 6.0 * (M - 1.0) * K * std::exp(-t.exponent_rate * std::pow(x, t.power));
            break;
        case TailTerm::T32:
            t.exponent_rate = delta_t(g);
            t.power = 2.0 / 3.0;
            t.bound = 8.0 * (K - 1.0) * std::exp(-t.exponent_rate * std::pow(x, t.power));
            break;
        case TailTerm::S321:
            if (x < 1) throw std::invalid_argument("component_tail_bound: S321 needs x >= 1");
            t.valid_from = 1.0;
            t.exponent_rate = delta32(g);
            t.power = 2.0 / 7.0;
            t.bound = 64.0 * ((K - 1.0) * K * (M - 1.0) * (M - 1.0) / M) *
                      std::exp(-t.exponent_rate * std::pow(x, t.power));
            break;
        case TailTerm::S322:
            if (x < 1) throw std::invalid_argument("component_tail_bound: S322 needs x >= 1");
            t.valid_from = 1.0;
            t.exponent_rate = delta32(g);
            t.power = 2.0 / 7.0;
            t.bound = 64.0 * ((K - 1.0) * K * (M - 1.0) / M) *
                      std::exp(-t.exponent_rate * std::pow(x, t.power));
            break;
        case TailTerm::S4:
            t.exponent_rate = delta4(g);
            t.power = 2.0 / 3.0;
            t.bound = 3.0 * K * std::exp(-t.exponent_rate * std::pow(x, t.power));
            break;
        case TailTerm::S4Chernoff:
            // Unit-gain reference form; gains are not used.
            t.exponent_rate = 0.5;
            t.power = 2.0;
            t.bound = 2.0 * std::exp(-0.5 * x * x);
            break;
    }
    return t;
}

double refined_p1_fail_bound(double M, double K, const RefinedDeviations& xs,
                             const GainBounds& g) {
    return component_tail_bound(TailTerm::S1, M, K, xs.x1, g).bound +
           component_tail_bound(TailTerm::S2, M, K, xs.x2, g).bound +
           component_tail_bound(TailTerm::S31, M, K, xs.x31, g).bound +
           component_tail_bound(TailTerm::S321, M, K, xs.x321, g).bound +
           component_tail_bound(TailTerm::S322, M, K, xs.x322, g).bound +
           component_tail_bound(TailTerm::S4, M, K, xs.x4, g).bound;
}

SinrInterval sinr_interval_refined_p1(double M, double K, const RefinedDeviations& xs,
                                      const GainBounds& g, double sigma2) {
    if (M < 2 || K < 2)
        throw std::invalid_argument("sinr_interval_refined_p1: M, K >= 2 required");
    for (double v : {xs.x1, xs.x2, xs.x31, xs.x4})
        if (v < 0) throw std::invalid_argument("sinr_interval_refined_p1: deviations must be >= 0");
    if (xs.x321 < 1 || xs.x322 < 1)
        throw std::invalid_argument("sinr_interval_refined_p1: x321, x322 >= 1 required");

    const double C_lo2 = g.C_lo * g.C_lo, C_hi2 = g.C_hi * g.C_hi;
    const double c_lo2 = g.c_lo * g.c_lo, c_hi2 = g.c_hi * g.c_hi;
    const double Csn_lo2 = g.Csn_lo * g.Csn_lo, Csn_hi2 = g.Csn_hi * g.Csn_hi;
    const double root_k = std::sqrt(K);
    const double m1 = M - 1.0;
    const double s321 = std::sqrt((K - 1.0) * m1 * m1 / (K * std::pow(M, 3)));
    const double s322 = std::sqrt((K - 1.0) * m1 / (K * std::pow(M, 3)));

    const double un =
        std::pow(1.0 + (4.0 / (g.C_hi * kPi)) * std::sqrt(M / K) * xs.x1 +
                     (4.0 / (g.C_hi * kPi)) * std::sqrt(M * m1 / K) * xs.x2,
                 2);
    const double ud =
        std::max(0.0, (C_lo2 / Csn_lo2) * m1 / M - (1.0 / Csn_lo2) * (m1 / (M * root_k)) * xs.x31 -
                          (1.0 / Csn_lo2) * s321 * xs.x321 - (1.0 / Csn_lo2) * s322 * xs.x322) +
        (sigma2 / Csn_lo2) * std::max(0.0, c_lo2 - xs.x4 / root_k) + sigma2 / Csn_lo2;

    const double ln = std::pow(
        std::max(0.0, 1.0 - (4.0 / (g.C_lo * kPi)) * std::sqrt(M / K) * xs.x1 -
                          (4.0 / (g.C_lo * kPi)) * std::sqrt(M * m1 / K) * xs.x2),
        2);
    const double ld = (C_hi2 / Csn_hi2) * m1 / M + (1.0 / Csn_hi2) * (m1 / (M * root_k)) * xs.x31 +
                      (1.0 / Csn_hi2) * s321 * xs.x321 + (1.0 / Csn_hi2) * s322 * xs.x322 +
                      (sigma2 / Csn_hi2) * (c_hi2 + xs.x4 / root_k) + sigma2 / Csn_hi2;

    SinrInterval out;
    out.x = xs.x1;
    out.upper = kPi2Over16 * (C_hi2 / Csn_lo2) * K / std::pow(M, 3) * un / ud;
    out.lower = kPi2Over16 * (C_lo2 / Csn_hi2) * K / std::pow(M, 3) * ln / ld;
    out.fail_prob_bound = 2.0 * refined_p1_fail_bound(M, K, xs, g);
    return out;
}

}  // namespace relaycap
