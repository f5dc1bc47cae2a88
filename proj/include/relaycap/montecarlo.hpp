#ifndef RELAYCAP_MONTECARLO_HPP
#define RELAYCAP_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "relaycap/af.hpp"
#include "relaycap/coherent.hpp"
#include "relaycap/core_model.hpp"
#include "relaycap/linalg.hpp"

namespace relaycap::mc {

/// Worker count: explicit argument > RELAYCAP_WORKERS env var > hardware.
int default_workers();

/// Runs fn(trial) for trial in [0, trials); trials are sharded across
/// workers but each trial's randomness is keyed by its own index, so the
/// result set is scheduling-independent.
void parallel_trials(std::uint64_t trials, int workers,
                     const std::function<void(std::uint64_t)>& fn);

struct EmpiricalCdf {
    std::vector<double> samples;  // ascending
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    /// Right-continuous step function in [0, 1].
    double eval(double x) const;
};

/// Trial-indexed (unsorted) SINR samples of link 0; the plain-P1 path only
/// materializes the second-hop entries the SINR actually reads.
std::vector<double> sinr_samples(const NetworkConfig& config, Protocol protocol,
                                 std::uint64_t trials, int workers = 0);

EmpiricalCdf sinr_cdf(const NetworkConfig& config, Protocol protocol, std::uint64_t trials,
                      int workers = 0);

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

Estimate outage_estimate(const NetworkConfig& config, Protocol protocol, double rate,
                         std::uint64_t trials, int workers = 0);
Estimate ergodic_estimate(const NetworkConfig& config, Protocol protocol, std::uint64_t trials,
                          int workers = 0);

/// Finite-size AF capacity: eigenvalues of (1/M) H H^H T through the
/// Hermitian similarity T^{1/2} (1/M) H H^H T^{1/2}, averaged as
/// (1/2M) sum log2(1 + lambda/sigma2).
Estimate af_capacity_mc(int M, int K, double d, double sigma2, std::uint64_t trials,
                        std::uint64_t seed = 0, int workers = 0);

/// Pooled eigenvalue samples across trials (ascending).
std::vector<double> esd_mp_samples(int N, int Nprime, double d, std::uint64_t trials,
                                   std::uint64_t seed = 0, int workers = 0);
std::vector<double> esd_t_samples(int M, int K, double d, std::uint64_t trials,
                                  std::uint64_t seed = 0, int workers = 0);
std::vector<double> esd_product_samples(int M, int K, double d, std::uint64_t trials,
                                        std::uint64_t seed = 0, int workers = 0);

/// All-real eigenvalues of a Hermitian matrix (defensively symmetrized;
/// asymmetry above 1e-10 is rejected).
std::vector<double> hermitian_eigenvalues(const linalg::CMatrix& a);

/// Sup distance between an empirical CDF and the CDF of a density curve
/// (trapezoid integral plus its atom at zero), evaluated at the sample
/// points.
double ks_distance(const EmpiricalCdf& emp, const af::DensityCurve& model);

EmpiricalCdf make_cdf(std::vector<double> samples, std::uint64_t seed);

}  // namespace relaycap::mc

#endif
