#ifndef RELAYCAP_CONCENTRATION_HPP
#define RELAYCAP_CONCENTRATION_HPP

#include "relaycap/coherent.hpp"
#include "relaycap/core_model.hpp"
#include "relaycap/ldp.hpp"

namespace relaycap {

/// Deviation interval for the per-link SINR at deviation parameter x:
/// P{SINR not in [lower, upper]} <= fail_prob_bound. The bound is reported
/// un-clamped (it may exceed 1); clamped() is the convenience probability.
struct SinrInterval {
    double lower = 0.0;
    double upper = 0.0;
    double fail_prob_bound = 0.0;
    double x = 0.0;
    double clamped() const { return fail_prob_bound < 1.0 ? fail_prob_bound : 1.0; }
};

/// Single-parameter concentration interval (P1: exponent x^{2/7}, prefactor
/// 302 K^2 M; P2: exponent x^{2/9}, prefactor 814 K^2 M^3). Requires
/// M >= 2, K >= 2, x >= 1.
SinrInterval sinr_interval(Protocol protocol, double M, double K, double x,
                           const GainBounds& gains, double sigma2);

/// Per-component deviation parameters of the refined P1 interval.
struct RefinedDeviations {
    double x1 = 1, x2 = 1, x31 = 1, x321 = 1, x322 = 1, x4 = 1;
};

/// Multi-parameter refined P1 interval. fail_prob_bound is the two-sided
/// assembly 2*P_U (each side individually obeys P_U). With all deviation
/// parameters equal this interval is contained in sinr_interval's and
/// 2*P_U never exceeds the 302 K^2 M form.
SinrInterval sinr_interval_refined_p1(double M, double K, const RefinedDeviations& xs,
                                      const GainBounds& gains, double sigma2);
double refined_p1_fail_bound(double M, double K, const RefinedDeviations& xs,
                             const GainBounds& gains);

/// The individual concentration bounds the refined interval is assembled
/// from. S4 is the truncation form; S4Chernoff is the 2 e^{-x^2/2}
/// unit-gain Chernoff reference.
enum class TailTerm { S1, S2, S31, T32, S321, S322, S4, S4Chernoff };

ldp::TailBound component_tail_bound(TailTerm term, double M, double K, double x,
                                    const GainBounds& gains);

}  // namespace relaycap

#endif
