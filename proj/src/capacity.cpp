#include "relaycap/capacity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace relaycap {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2Over16 = kPi * kPi / 16.0;
}  // namespace

double medard_lower_bound(const LinkMoments& moments, double sigma_x2) {
    if (moments.var_f_tilde < 0 || moments.var_w < 0 || sigma_x2 < 0)
        throw std::invalid_argument("medard_lower_bound: variances must be >= 0");
    const double denom = moments.var_f_tilde * sigma_x2 + moments.var_w;
    if (!(denom > 0))
        throw std::invalid_argument("medard_lower_bound: degenerate noise-free channel");
    return std::log2(1.0 + moments.f_bar * moments.f_bar * sigma_x2 / denom);
}

LinkMoments p1_moments(const NetworkConfig& config, int m) {
    config.validate();
    const int M = config.M, K = config.K;
    const std::vector<int> part = relay_partition(K, M);

    double own_sum = 0.0, own_sq = 0.0, all_sq = 0.0, interf_sq = 0.0, noise_sq = 0.0;
    for (int k = 0; k < K; ++k) {
        const double dk = relay_scale_p1(config, k);
        const double c_mm = std::sqrt(static_cast<double>(K)) * dk *
                            std::sqrt(config.energy_second_hop(m, k) * config.energy_first_hop(k, m));
        const double c_m =
            std::sqrt(static_cast<double>(K)) * dk * std::sqrt(config.energy_second_hop(m, k));
        all_sq += c_mm * c_mm;
        if (part[static_cast<std::size_t>(k)] == m) {
            own_sum += c_mm;
            own_sq += c_mm * c_mm;
        }
        noise_sq += c_m * c_m;
        for (int mh = 0; mh < M; ++mh) {
            if (mh == m) continue;
            const double c = std::sqrt(static_cast<double>(K)) * dk *
                             std::sqrt(config.energy_second_hop(m, k) * config.energy_first_hop(k, mh));
            interf_sq += c * c;
        }
    }

    LinkMoments out;
    out.f_bar = (kPi / 4.0) * own_sum / std::sqrt(static_cast<double>(K));
    out.var_f_tilde = (all_sq - kPi2Over16 * own_sq) / K;
    out.var_w = interf_sq / (static_cast<double>(K) * M) + config.sigma2 * noise_sq / K +
                config.sigma2;
    return out;
}

LinkMoments p2_moments(const NetworkConfig& config, int m) {
    config.validate();
    const int M = config.M, K = config.K;
    const double root_km = std::sqrt(static_cast<double>(K) * M);

    double own_sum = 0.0, own_sq = 0.0, interf_sq = 0.0, noise_sq = 0.0;
    for (int k = 0; k < K; ++k) {
        const double dk = relay_scale_p2(config, k);
        const double c_mm =
            root_km * dk * std::sqrt(config.energy_second_hop(m, k) * config.energy_first_hop(k, m));
        const double c_m = root_km * dk * std::sqrt(config.energy_second_hop(m, k));
        own_sum += c_mm;
        own_sq += c_mm * c_mm;
        noise_sq += c_m * c_m;
        for (int mh = 0; mh < M; ++mh) {
            if (mh == m) continue;
            const double c = root_km * dk * std::sqrt(config.energy_second_hop(m, k) *
                                                      config.energy_first_hop(k, mh));
            interf_sq += c * c;
        }
    }

    LinkMoments out;
    out.f_bar = (kPi / 4.0) * own_sum / root_km;
    out.var_f_tilde = own_sq * (M - kPi2Over16) / (static_cast<double>(K) * M);
    out.var_w = interf_sq / (static_cast<double>(K) * M) + config.sigma2 * noise_sq / K +
                config.sigma2;
    return out;
}

LinkMoments coop_p1_moments(const NetworkConfig& config, int m) {
    config.validate();
    const int M = config.M, Q = config.Q, L = config.L;
    const std::vector<int> part = relay_partition(Q, M);
    const double root_q = std::sqrt(static_cast<double>(Q));
    const double l2 = static_cast<double>(L) * L;
    // variance factors of the coherently combined L-antenna inner products
    const double coh_sq = std::pow(L + (kPi / 4.0) * (L - 1) * L, 2);  // E (sum|.|)^2 scaling
    const double semi = l2 + (kPi / 4.0) * l2 * (L - 1);

    double own_sum = 0.0, own_sq = 0.0, other_sq = 0.0;
    double interf_own = 0.0, interf_hat = 0.0, interf_rest = 0.0;
    double noise_own = 0.0, noise_other = 0.0;
    for (int q = 0; q < Q; ++q) {
        const double dq = vrelay_scale_p1(config, q);
        const double p_mq = config.energy_second_hop(m, q * L);
        const double c_mm =
            root_q * dq * std::sqrt(p_mq * config.energy_first_hop(q * L, m));
        const double c_m = root_q * dq * std::sqrt(p_mq);
        const int pq = part[static_cast<std::size_t>(q)];
        if (pq == m) {
            own_sum += c_mm;
            own_sq += c_mm * c_mm;
            noise_own += c_m * c_m;
        } else {
            other_sq += c_mm * c_mm;
            noise_other += c_m * c_m;
        }
        for (int mh = 0; mh < M; ++mh) {
            if (mh == m) continue;
            const double c =
                root_q * dq * std::sqrt(p_mq * config.energy_first_hop(q * L, mh));
            if (pq == m)
                interf_own += c * c;
            else if (pq == mh)
                interf_hat += c * c;
            else
                interf_rest += c * c;
        }
    }

    LinkMoments out;
    out.f_bar = (kPi / 4.0) * l2 * own_sum / root_q;
    out.var_f_tilde = l2 * other_sq / Q + (coh_sq - kPi2Over16 * l2 * l2) * own_sq / Q;
    out.var_w = semi * (interf_own + interf_hat) / (static_cast<double>(Q) * M) +
                l2 * interf_rest / (static_cast<double>(Q) * M) +
                semi * config.sigma2 * noise_own / Q + l2 * config.sigma2 * noise_other / Q +
                config.sigma2;
    return out;
}

double ergodic_lower_p1_finite(const NetworkConfig& config) {
    const GainBounds g = derive_constants(config);
    const double arg = kPi2Over16 * g.C_lo * g.C_lo /
                       (g.C_hi * g.C_hi / config.M + g.Csn_hi * g.Csn_hi) * config.K /
                       std::pow(config.M, 3);
    return 0.5 * std::log2(1.0 + arg);
}

CapacityInterval ergodic_interval(Protocol protocol, double M, double K_or_Q, int L,
                                  double eps, double delta, const GainBounds& g,
                                  [[maybe_unused]] double sigma2) {
    // sigma2 enters only through the signal+noise constants inside g
    if (!(eps > 0) || !(delta > 0))
        throw std::invalid_argument("ergodic_interval: eps, delta > 0 required");
    const double lo_ratio = g.C_lo * g.C_lo / (g.Csn_hi * g.Csn_hi);
    const double hi_ratio = g.C_hi * g.C_hi / (g.Csn_lo * g.Csn_lo);
    const double l2 = static_cast<double>(L) * L;
    CapacityInterval out;
    switch (protocol) {
        case Protocol::P1: {
            const double grow = std::max(K_or_Q, std::pow(M, 2.0 + delta));
            out.lower = 0.5 * std::log2(1.0 + kPi2Over16 * lo_ratio * K_or_Q / std::pow(M, 3) *
                                                  (1.0 - eps));
            out.upper =
                0.5 * std::log2(1.0 + kPi2Over16 * hi_ratio * grow / std::pow(M, 3) * (1.0 + eps));
            break;
        }
        case Protocol::P2: {
            const double grow = std::max(K_or_Q, std::pow(M, 1.0 + delta));
            out.lower = 0.5 * std::log2(1.0 + kPi2Over16 * lo_ratio * K_or_Q / (M * M) * (1.0 - eps));
            out.upper = 0.5 * std::log2(1.0 + kPi2Over16 * hi_ratio * grow / (M * M) * (1.0 + eps));
            break;
        }
        case Protocol::P1Coop: {
            const double grow = std::max(K_or_Q, std::pow(M, 2.0 + delta));
            out.lower = 0.5 * std::log2(1.0 + kPi2Over16 * K_or_Q * l2 / std::pow(M, 3) *
                                                  lo_ratio * (1.0 - eps));
            out.upper = 0.5 * std::log2(1.0 + kPi2Over16 * grow * l2 / std::pow(M, 3) * hi_ratio *
                                                  (1.0 - eps));
            break;
        }
        case Protocol::P2Coop: {
            const double grow = std::max(K_or_Q, std::pow(M, 1.0 + delta));
            out.lower = 0.5 * std::log2(1.0 + kPi2Over16 * K_or_Q * l2 / (M * M) * lo_ratio *
                                                  (1.0 - eps));
            out.upper = 0.5 * std::log2(1.0 + kPi2Over16 * grow * l2 / (M * M) * hi_ratio *
                                                  (1.0 - eps));
            break;
        }
    }
    return out;
}

OutageBound outage_bound_p1(double M, double K, double R, const GainBounds& g,
                            double sigma2) {
    if (M < 2 || K < 2) throw std::invalid_argument("outage_bound_p1: M, K >= 2 required");
    if (R < 0) throw std::invalid_argument("outage_bound_p1: R >= 0 required");
    const double Csn_hi2 = g.Csn_hi * g.Csn_hi;
    const double e = (16.0 / (kPi * kPi)) * (Csn_hi2 / (g.C_lo * g.C_lo)) * std::pow(M, 3) / K *
                     (std::pow(2.0, 2.0 * R) - 1.0);
    OutageBound out;
    const double denom = (16.0 / (g.C_lo * kPi)) * M / std::sqrt(K) +
                         e * (3.0 / (Csn_hi2 * std::sqrt(M)) + sigma2 / (Csn_hi2 * std::sqrt(K)));
    out.x_of_r = (1.0 - e) / denom;
    out.in_regime = out.x_of_r >= 1.0;
    if (out.in_regime)
        out.p_out_bound = 151.0 * K * K * M *
                          std::exp(-g.delta_p1 * std::pow(out.x_of_r, 2.0 / 7.0));
    else
        out.p_out_bound = std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace relaycap
