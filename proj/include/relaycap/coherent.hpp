#ifndef RELAYCAP_COHERENT_HPP
#define RELAYCAP_COHERENT_HPP

#include <vector>

#include "relaycap/core_model.hpp"

namespace relaycap {

enum class Protocol { P1, P2, P1Coop, P2Coop };

const char* protocol_name(Protocol p);
bool is_cooperative(Protocol p);

/// Per-link SISO view of the relayed network for one realization:
/// y_m = effective_gain * s_m + sum interference_gains[j] * s_{m_j}
///       + sum relay_noise_gains[k] * z_k + dest_noise_gain * w_m.
struct SisoDecomposition {
    cplx effective_gain{};
    std::vector<cplx> interference_gains;  // indexed over m_hat != m, ascending
    std::vector<cplx> relay_noise_gains;   // length K (per relay antenna)
    double dest_noise_gain = 1.0;
};

struct SinrValue {
    double value = 0.0;
    Protocol protocol = Protocol::P1;
    int link = 0;
};

/// Relay energy normalizers. The v-relay variants require constant gains
/// within each cooperation group and reduce to the single-antenna ones at
/// L = 1.
double relay_scale_p1(const NetworkConfig& config, int k);
double relay_scale_p2(const NetworkConfig& config, int k);
double vrelay_scale_p1(const NetworkConfig& config, int q);
double vrelay_scale_p2(const NetworkConfig& config, int q);

/// All three signal stages of one literal pass through the network. This is
/// the oracle path the decomposition is tested against.
struct ChainSignals {
    std::vector<cplx> relay_input;   // r, length K
    std::vector<cplx> relay_output;  // t, length K
    std::vector<cplx> received;      // y, length M
};

ChainSignals run_chain(const NetworkConfig& config, const ChannelRealization& chan,
                       const std::vector<cplx>& s, const std::vector<cplx>& z,
                       const std::vector<cplx>& w, Protocol protocol);

SisoDecomposition decompose_siso(const NetworkConfig& config, const ChannelRealization& chan,
                                 int m, Protocol protocol);

/// Effective SINR of the m-th source-destination link conditioned on the
/// realization. For P1/P2 this evaluates the closed-form coefficient-sum
/// expression; the cooperative variants assemble the same conditional
/// variance ratio from the v-relay decomposition.
SinrValue sinr(const NetworkConfig& config, const ChannelRealization& chan, int m,
               Protocol protocol);
SinrValue sinr_coop(const NetworkConfig& config, const ChannelRealization& chan, int m,
                    Protocol protocol);

/// Conditional SINR computed directly from a decomposition (per-source power
/// 1/M, relay/destination noise power sigma2).
double sinr_from_decomposition(const NetworkConfig& config, const SisoDecomposition& d);

/// Half-duplex mutual information in bits per channel use.
double mutual_information(const SinrValue& s);

/// Pairwise (cascade) summation; keeps rounding error O(log n) for the long
/// coefficient sums.
double pairwise_sum(std::vector<double>& terms);
cplx pairwise_sum(std::vector<cplx>& terms);

}  // namespace relaycap

#endif
