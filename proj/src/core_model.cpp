#include "relaycap/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "relaycap/rng.hpp"

namespace relaycap {

NetworkConfig NetworkConfig::uniform_gains(int M, int K, double sigma2, double p_rel,
                                           double e_const, double p_const, int L,
                                           std::uint64_t seed) {
    NetworkConfig cfg;
    cfg.M = M;
    cfg.K = K;
    cfg.sigma2 = sigma2;
    cfg.p_rel = p_rel;
    cfg.E.assign(static_cast<std::size_t>(K) * M, e_const);
    cfg.P.assign(static_cast<std::size_t>(M) * K, p_const);
    cfg.L = L;
    cfg.Q = (L > 0 && K % L == 0) ? K / L : 0;
    cfg.seed = seed;
    cfg.derive_gain_bounds();
    cfg.validate();
    return cfg;
}

void NetworkConfig::derive_gain_bounds() {
    if (e_lo <= 0 && !E.empty()) {
        e_lo = *std::min_element(E.begin(), E.end());
        e_hi = *std::max_element(E.begin(), E.end());
    }
    if (p_lo <= 0 && !P.empty()) {
        p_lo = *std::min_element(P.begin(), P.end());
        p_hi = *std::max_element(P.begin(), P.end());
    }
}

void NetworkConfig::validate() const {
    if (M < 1 || K < 1) throw std::invalid_argument("NetworkConfig: M >= 1 and K >= 1 required");
    if (!(sigma2 > 0)) throw std::invalid_argument("NetworkConfig: sigma2 must be positive");
    if (!(p_rel > 0)) throw std::invalid_argument("NetworkConfig: P_rel must be positive");
    if (E.size() != static_cast<std::size_t>(K) * M)
        throw std::invalid_argument("NetworkConfig: E must be K x M");
    if (P.size() != static_cast<std::size_t>(M) * K)
        throw std::invalid_argument("NetworkConfig: P must be M x K");
    if (L < 1) throw std::invalid_argument("NetworkConfig: L >= 1 required");
    if (L * Q != K)
        throw std::invalid_argument("NetworkConfig: Q*L must equal K (got Q=" +
                                    std::to_string(Q) + ", L=" + std::to_string(L) + ")");
    if (!(e_lo > 0) || !(p_lo > 0))
        throw std::invalid_argument("NetworkConfig: gain lower bounds must be positive");
    for (double e : E)
        if (!(e >= e_lo && e <= e_hi))
            throw std::invalid_argument("NetworkConfig: entry of E outside [e_lo, e_hi]");
    for (double p : P)
        if (!(p >= p_lo && p <= p_hi))
            throw std::invalid_argument("NetworkConfig: entry of P outside [p_lo, p_hi]");
}

GainBounds derive_constants(const NetworkConfig& config) {
    config.validate();
    const double s2 = config.sigma2;
    GainBounds g;
    g.C_lo = std::sqrt(config.p_lo * config.e_lo * config.p_rel / (config.e_hi + s2));
    g.C_hi = std::sqrt(config.p_hi * config.e_hi * config.p_rel / (config.e_lo + s2));
    g.c_lo = std::sqrt(config.p_lo * config.p_rel / (config.e_hi + s2));
    g.c_hi = std::sqrt(config.p_hi * config.p_rel / (config.e_lo + s2));
    g.Csn_lo = std::sqrt(g.C_lo * g.C_lo + s2 * (g.c_lo * g.c_lo + 1.0));
    g.Csn_hi = std::sqrt(g.C_hi * g.C_hi + s2 * (g.c_hi * g.c_hi + 1.0));

    const double C2 = g.C_hi * g.C_hi;
    const double C4 = C2 * C2;
    const double c4 = std::pow(g.c_hi, 4);
    g.delta_p1 = std::min({std::pow(2.0, -10.0 / 21.0), 1.0 / (std::pow(2.0, 31.0 / 21.0) * C2),
                           1.0 / (8.0 * C4), 1.0 / (4.0 * c4)});
    g.delta_p2 = std::min({std::pow(2.0, -11.0 / 5.0), 1.0 / (std::pow(2.0, 61.0 / 36.0) * C2),
                           1.0 / (8.0 * C4), 1.0 / (4.0 * c4)});
    return g;
}

namespace {
inline std::uint64_t h_index(const NetworkConfig& c, int k, int m) {
    return static_cast<std::uint64_t>(k) * c.M + m;
}
inline std::uint64_t f_index(const NetworkConfig& c, int m, int k) {
    return static_cast<std::uint64_t>(c.K) * c.M + static_cast<std::uint64_t>(m) * c.K + k;
}
}  // namespace

cplx channel_entry_h(const NetworkConfig& config, std::uint64_t stream, int k, int m) {
    return rng::cnormal(config.seed, stream, h_index(config, k, m));
}

cplx channel_entry_f(const NetworkConfig& config, std::uint64_t stream, int m, int k) {
    return rng::cnormal(config.seed, stream, f_index(config, m, k));
}

std::uint64_t symbol_draw_index(const NetworkConfig& c, int m) {
    return 2ull * c.K * c.M + m;
}
std::uint64_t relay_noise_draw_index(const NetworkConfig& c, int k) {
    return 2ull * c.K * c.M + c.M + k;
}
std::uint64_t dest_noise_draw_index(const NetworkConfig& c, int m) {
    return 2ull * c.K * c.M + c.M + c.K + m;
}

ChannelRealization sample_channels(const NetworkConfig& config, std::uint64_t stream) {
    ChannelRealization r;
    r.K = config.K;
    r.M = config.M;
    r.H.resize(static_cast<std::size_t>(config.K) * config.M);
    r.F.resize(static_cast<std::size_t>(config.M) * config.K);
    for (int k = 0; k < config.K; ++k)
        for (int m = 0; m < config.M; ++m)
            r.H[static_cast<std::size_t>(k) * config.M + m] =
                rng::cnormal(config.seed, stream, h_index(config, k, m));
    for (int m = 0; m < config.M; ++m)
        for (int k = 0; k < config.K; ++k)
            r.F[static_cast<std::size_t>(m) * config.K + k] =
                rng::cnormal(config.seed, stream, f_index(config, m, k));
    return r;
}

std::vector<int> relay_partition(int K, int M) {
    if (K < 1 || M < 1 || K % M != 0)
        throw std::invalid_argument("relay_partition: M must divide K");
    std::vector<int> p(static_cast<std::size_t>(K));
    const int per = K / M;
    for (int k = 0; k < K; ++k) p[static_cast<std::size_t>(k)] = k / per;
    return p;
}

}  // namespace relaycap
