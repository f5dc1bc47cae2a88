#ifndef RELAYCAP_LDP_HPP
#define RELAYCAP_LDP_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace relaycap::ldp {

/// A probability upper bound together with the deviation threshold it is
/// valid from and its exponential profile: bound = prefactor *
/// exp(-exponent_rate * x^power). Bounds are returned un-clamped; they may
/// exceed 1, and callers that want probabilities min with 1 themselves.
struct TailBound {
    double bound = 1.0;
    double valid_from = 0.0;
    double exponent_rate = 0.0;
    double power = 1.0;
};

/// Hoeffding tail for a sum of N independent RVs with X_n in [A_n, B_n]:
/// P{S - E S >= N x} <= exp(-2 N^2 x^2 / sum (B_n - A_n)^2).
TailBound hoeffding(int N, const std::vector<std::pair<double, double>>& ranges, double x);

/// Maurer lower-tail for nonnegative independent RVs:
/// P{S - E S <= -N x} <= exp(-N^2 x^2 / (2 sum E[X_n^2])).
TailBound maurer(int N, const std::vector<double>& second_moments, double x);

/// Truncated-sum tail for S = sum A_n X_n phi_n with possibly dependent X_n
/// whose tails obey P{|X_n| >= t} <= B e^{-alpha t^beta} for t >= x0, and
/// independent bounded zero-mean phi_n:
/// P{|S| >= sqrt(N) x} <= 2 max[2, NB] exp(-min[1/(2A^2), alpha] x^{2b/(2+b)}).
/// Valid for x >= x0^{(2+beta)/2} (recorded in valid_from).
TailBound truncation_bound(int N, double B, double alpha, double beta, double A, double x,
                           double x0 = 0.0);

/// Complex-phase variant (phi_n uniform on (-pi, pi]); picks up a factor 2
/// in the prefactor and 2^{-b/(b+2)} in the exponent.
TailBound truncation_bound_complex(int N, double B, double alpha, double beta, double A,
                                   double x, double x0 = 0.0);

/// Nonnegative independent variant with E[X_n^2] <= C:
/// P{|S - E S| >= sqrt(N) x} <= 3 max[1, NB] exp(-min[2/A^2, alpha,
/// 1/(2 A^2 C)] x^{2b/(b+2)}).
TailBound truncation_bound_nonneg(int N, double B, double alpha, double beta, double A,
                                  double C, double x, double x0 = 0.0);

/// (threshold, probability) pairs P{|X| >= c} <= p flowing through the
/// union-bound combinators.
struct BoundPair {
    double c = 0.0;
    double p = 0.0;
};

BoundPair combine_sum(const std::vector<BoundPair>& parts);
BoundPair combine_pythagorean(const BoundPair& real_part, const BoundPair& imag_part);
/// Mixed sums: `uppers` bound |X_n| from above, `lowers` bound X'_n from
/// below; result bounds |sum X + sum X'| from below with the max[0, .] clamp.
BoundPair combine_mixed_lower(const std::vector<BoundPair>& uppers,
                              const std::vector<BoundPair>& lowers);
BoundPair combine_mixed_upper(const std::vector<BoundPair>& uppers,
                              const std::vector<BoundPair>& lowers);
BoundPair combine_product(const std::vector<BoundPair>& parts);
BoundPair combine_fraction(const BoundPair& numerator, const BoundPair& denominator);

/// Empirical falsification harness: `sampler(trial)` returns one scaled
/// deviation |S_N|/sqrt(N); for every grid x the empirical exceedance
/// probability is compared against `bound_fn(x)` and flagged when it
/// exceeds bound + 3 binomial standard errors.
struct TailCheckReport {
    std::vector<double> x;
    std::vector<double> empirical;
    std::vector<double> bound;
    std::vector<bool> violated;
    std::uint64_t trials = 0;
    int violations = 0;
};

TailCheckReport empirical_tail_check(const std::function<double(std::uint64_t)>& sampler,
                                     const std::function<TailBound(double)>& bound_fn,
                                     const std::vector<double>& x_grid, std::uint64_t trials);

}  // namespace relaycap::ldp

#endif
