#ifndef RELAYCAP_CAPACITY_HPP
#define RELAYCAP_CAPACITY_HPP

#include "relaycap/coherent.hpp"
#include "relaycap/core_model.hpp"

namespace relaycap {

/// First and second moments of one SISO link: mean effective gain, variance
/// of the unknown gain fluctuation, total interference-plus-noise variance.
struct LinkMoments {
    double f_bar = 0.0;
    double var_f_tilde = 0.0;
    double var_w = 0.0;
};

/// Mutual-information lower bound for a channel whose receiver only knows
/// the mean gain: log2(1 + f_bar^2 sx2 / (var_f_tilde * sx2 + var_w)).
double medard_lower_bound(const LinkMoments& moments, double sigma_x2);

LinkMoments p1_moments(const NetworkConfig& config, int m = 0);
LinkMoments p2_moments(const NetworkConfig& config, int m = 0);
LinkMoments coop_p1_moments(const NetworkConfig& config, int m = 0);

/// Finite-(M,K) ergodic lower bound for P1 (valid for arbitrary M, K):
/// (1/2) log2(1 + pi^2/16 * C_lo^2 / (C_hi^2/M + Csn_hi^2) * K/M^3).
double ergodic_lower_p1_finite(const NetworkConfig& config);

struct CapacityInterval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Asymptotic-form ergodic capacity interval. K_or_Q is K for P1/P2 and the
/// v-relay count Q for the cooperative variants; L enters through the L^2
/// array-gain factor.
CapacityInterval ergodic_interval(Protocol protocol, double M, double K_or_Q, int L,
                                  double eps, double delta, const GainBounds& gains,
                                  double sigma2);

/// Outage bound for P1 at rate R: the deviation x(R) the event maps to, and
/// the 151 K^2 M exp(-Delta_P1 x^{2/7}) probability bound. Out-of-regime
/// (x(R) < 1) is reported, not thrown.
struct OutageBound {
    double x_of_r = 0.0;
    double p_out_bound = 0.0;
    bool in_regime = false;
};

OutageBound outage_bound_p1(double M, double K, double R, const GainBounds& gains,
                            double sigma2);

}  // namespace relaycap

#endif
