#ifndef RELAYCAP_CORE_MODEL_HPP
#define RELAYCAP_CORE_MODEL_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace relaycap {

using cplx = std::complex<double>;

/// Static description of one two-hop interference relay network:
/// M source-destination pairs, K single-antenna relays, first-hop energy
/// gains E (K x M), second-hop energy gains P (M x K), relay cooperation in
/// groups of L (Q = K/L v-relays). All powers/energies are linear.
struct NetworkConfig {
    int M = 1;
    int K = 1;
    double sigma2 = 0.01;
    double p_rel = 1.0;
    std::vector<double> E;  // K x M, row-major, E[k*M + m]
    std::vector<double> P;  // M x K, row-major, P[m*K + k]
    int L = 1;
    int Q = 1;  // Q*L == K
    std::uint64_t seed = 0;

    // Interval bounds on the gains; derived from the matrices unless
    // overridden before validate().
    double e_lo = 0, e_hi = 0, p_lo = 0, p_hi = 0;

    double energy_first_hop(int k, int m) const { return E[static_cast<std::size_t>(k) * M + m]; }
    double energy_second_hop(int m, int k) const { return P[static_cast<std::size_t>(m) * K + k]; }

    /// Constant-gain convenience constructor (the usual reference setup is
    /// E = P = 1 throughout).
    static NetworkConfig uniform_gains(int M, int K, double sigma2, double p_rel,
                                       double e_const = 1.0, double p_const = 1.0,
                                       int L = 1, std::uint64_t seed = 0);

    /// Throws std::invalid_argument on violated invariants (dimensions,
    /// positivity, Q*L = K, gain bounds).
    void validate() const;

    /// Fills e_lo/e_hi/p_lo/p_hi from the matrices where not set.
    void derive_gain_bounds();
};

/// One fading draw: H (K x M) first-hop and F (M x K) second-hop channel
/// matrices with i.i.d. CN(0,1) entries.
struct ChannelRealization {
    int K = 0;
    int M = 0;
    std::vector<cplx> H;  // H[k*M + m]
    std::vector<cplx> F;  // F[m*K + k]

    cplx h(int k, int m) const { return H[static_cast<std::size_t>(k) * M + m]; }
    cplx f(int m, int k) const { return F[static_cast<std::size_t>(m) * K + k]; }
};

/// The scalar constants every analytic bound consumes. C_lo/C_hi bound the
/// signal-path constants, c_lo/c_hi the noise-path constants, Csn_* the
/// combined signal+noise normalizers, delta_* the concentration exponents.
struct GainBounds {
    double C_lo = 0, C_hi = 0;
    double c_lo = 0, c_hi = 0;
    double Csn_lo = 0, Csn_hi = 0;
    double delta_p1 = 0, delta_p2 = 0;
};

GainBounds derive_constants(const NetworkConfig& config);

/// Deterministic sampling keyed by (config.seed, stream); the same pair
/// always yields the same matrices.
ChannelRealization sample_channels(const NetworkConfig& config, std::uint64_t stream);

/// Individual channel entries as pure functions of (seed, stream), matching
/// sample_channels element-wise. Useful when only a slice of a realization
/// is needed.
cplx channel_entry_h(const NetworkConfig& config, std::uint64_t stream, int k, int m);
cplx channel_entry_f(const NetworkConfig& config, std::uint64_t stream, int m, int k);

// Counter layout inside one (seed, stream) pair: H, then F, then the symbol
// and noise draws used by Monte Carlo chains.
std::uint64_t symbol_draw_index(const NetworkConfig& config, int m);
std::uint64_t relay_noise_draw_index(const NetworkConfig& config, int k);
std::uint64_t dest_noise_draw_index(const NetworkConfig& config, int m);

/// Contiguous-block relay partition p: {0..K-1} -> {0..M-1} with equal
/// fibers of size K/M. Throws if M does not divide K.
std::vector<int> relay_partition(int K, int M);

/// Group index of relay k when relays cooperate in blocks of L.
inline int group_of_relay(int k, int L) { return k / L; }

}  // namespace relaycap

#endif
