#ifndef RELAYCAP_AF_HPP
#define RELAYCAP_AF_HPP

#include <array>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace relaycap::af {

using cplx = std::complex<double>;

/// Asymptotic amplify-and-forward regime: K/M -> beta, relay scale
/// d = sqrt(P_rel / (1 + sigma2)), noise variance sigma2.
struct AfParams {
    double beta = 1.0;
    double d = 1.0;
    double sigma2 = 0.01;

    void validate() const;
};

/// Sampled continuous density plus a point mass at zero. Total mass
/// (trapezoid + atom) is 1 up to discretization.
struct DensityCurve {
    std::vector<double> grid;
    std::vector<double> values;
    double atom_at_zero = 0.0;
    std::pair<double, double> support{0.0, 0.0};

    double trapezoid_mass() const;
    double total_mass() const { return trapezoid_mass() + atom_at_zero; }
};

struct StieltjesPoint {
    cplx z{};
    cplx G{};
    double residual = 0.0;
};

/// Marchenko-Pastur density of (1/K) F F^H with entry variance d^2 and
/// aspect ratio beta: support [gamma1, gamma2], atom [1 - beta]^+ at zero.
DensityCurve mp_density(const AfParams& params, int points = 2001);

/// Limiting density of the relay correlation matrix T: the MP law pushed
/// through x -> x/(1+x), support [g1/(1+g1), g2/(1+g2)], atom [1 - 1/beta]^+.
DensityCurve ft_density(const AfParams& params, int points = 2001);

/// Monic quartic coefficients (a3, a2, a1, a0) satisfied by the shifted
/// transform Ghat = -(1-beta)/z + beta G.
std::array<cplx, 4> quartic_coeffs(cplx z, const AfParams& params);

/// Roots of x^4 + c3 x^3 + c2 x^2 + c1 x + c0 via companion-matrix QR with
/// one Newton refinement pass per root.
std::array<cplx, 4> solve_quartic(const std::array<cplx, 4>& coeffs);

/// Residual magnitude of the scalar fixed-point identity evaluated with the
/// closed-form partial-fraction integrals; zero (numerically) only at the
/// correct Stieltjes branch.
double fixedpoint_residual(cplx G, cplx z, const AfParams& params);

/// Closed form of the atom-side partial-fraction integral,
/// (sqrt(beta)+1) |sqrt(beta)-1| / (2 beta); merges with the point mass at
/// zero into the beta-dependent constant of the fixed-point identity.
double atom_integral_constant(double beta);

/// The unique Stieltjes transform value at z in C^+: solves the quartic,
/// reflects candidates into C^+, and keeps the candidate with the smaller
/// fixed-point residual.
StieltjesPoint stieltjes_G(cplx z, const AfParams& params, double residual_tol = 1e-6);

/// Upper bound on the support of the limiting product density:
/// d^2 (1+sqrt(beta))^4 / (beta + d^2 (1+sqrt(beta))^2).
double support_upper_bound(const AfParams& params);

/// Limiting eigenvalue density of (1/M) H H^H T via Stieltjes inversion on
/// the given grid (default: uniform on (0, x_max]). y_eps <= 0 selects the
/// default 1e-6 * x_max; the evaluation halves y_eps until two consecutive
/// smoothing levels agree to 1e-3 away from the support edges.
DensityCurve limiting_density(const AfParams& params, double y_eps = -1.0, int points = 2000);
DensityCurve limiting_density_on_grid(const AfParams& params, double y_eps,
                                      const std::vector<double>& grid);

/// Per-pair AF capacity (beta/2) Int log2(1 + x/sigma2) f(x) dx, adaptive
/// Simpson with sqrt-substitution at both endpoints.
double capacity_beta(const AfParams& params, double rel_tol = 1e-8);

/// beta -> infinity limit: quarter-circle-law integral at
/// SNR = d^2 / ((d^2+1) sigma2).
double capacity_infty(double d, double sigma2, double rel_tol = 1e-10);

/// beta -> infinity limit of beta * f(x); support [0, 4/(1+1/d^2)].
double limit_density_infty(double x, double d);

/// Generic adaptive Simpson on [a, b] (exposed for the dual-quadrature
/// checks in the tests).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth = 80);

}  // namespace relaycap::af

#endif
