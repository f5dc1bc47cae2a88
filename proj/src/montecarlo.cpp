#include "relaycap/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "relaycap/rng.hpp"

namespace relaycap::mc {

int default_workers() {
    if (const char* env = std::getenv("RELAYCAP_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_trials(std::uint64_t trials, int workers,
                     const std::function<void(std::uint64_t)>& fn) {
    if (workers <= 0) workers = default_workers();
    if (workers == 1 || trials < 2) {
        for (std::uint64_t t = 0; t < trials; ++t) fn(t);
        return;
    }
    const int nthreads = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), trials));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::uint64_t t = static_cast<std::uint64_t>(w); t < trials;
                     t += static_cast<std::uint64_t>(nthreads))
                    fn(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double EmpiricalCdf::eval(double x) const {
    const auto it = std::upper_bound(samples.begin(), samples.end(), x);
    return samples.empty() ? 0.0
                           : static_cast<double>(it - samples.begin()) / samples.size();
}

EmpiricalCdf make_cdf(std::vector<double> samples, std::uint64_t seed) {
    EmpiricalCdf cdf;
    cdf.trials = samples.size();
    cdf.seed = seed;
    std::sort(samples.begin(), samples.end());
    cdf.samples = std::move(samples);
    return cdf;
}

namespace {
// Link-0 P1 SINR touches row 0 of F plus the assigned entries f(p(k), k)
// only; fill exactly those (values identical to sample_channels).
ChannelRealization sample_p1_link0(const NetworkConfig& cfg, std::uint64_t stream,
                                   const std::vector<int>& part) {
    ChannelRealization r;
    r.K = cfg.K;
    r.M = cfg.M;
    r.H.resize(static_cast<std::size_t>(cfg.K) * cfg.M);
    r.F.assign(static_cast<std::size_t>(cfg.M) * cfg.K, cplx{});
    for (int k = 0; k < cfg.K; ++k)
        for (int m = 0; m < cfg.M; ++m)
            r.H[static_cast<std::size_t>(k) * cfg.M + m] = channel_entry_h(cfg, stream, k, m);
    for (int k = 0; k < cfg.K; ++k) {
        r.F[static_cast<std::size_t>(k)] = channel_entry_f(cfg, stream, 0, k);
        const int pm = part[static_cast<std::size_t>(k)];
        if (pm != 0)
            r.F[static_cast<std::size_t>(pm) * cfg.K + k] = channel_entry_f(cfg, stream, pm, k);
    }
    return r;
}

Estimate mean_stderr(const std::vector<double>& v) {
    Estimate e;
    if (v.empty()) return e;
    double sum = 0.0;
    for (double x : v) sum += x;
    e.value = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - e.value) * (x - e.value);
    if (v.size() > 1)
        e.stderr_ = std::sqrt(ss / (static_cast<double>(v.size()) - 1.0) /
                              static_cast<double>(v.size()));
    return e;
}
}  // namespace

std::vector<double> sinr_samples(const NetworkConfig& config, Protocol protocol,
                                 std::uint64_t trials, int workers) {
    std::vector<double> out(trials);
    if (protocol == Protocol::P1) {
        const std::vector<int> part = relay_partition(config.K, config.M);
        parallel_trials(trials, workers, [&](std::uint64_t t) {
            out[t] = sinr(config, sample_p1_link0(config, t, part), 0, Protocol::P1).value;
        });
    } else {
        parallel_trials(trials, workers, [&](std::uint64_t t) {
            out[t] = sinr(config, sample_channels(config, t), 0, protocol).value;
        });
    }
    return out;
}

EmpiricalCdf sinr_cdf(const NetworkConfig& config, Protocol protocol, std::uint64_t trials,
                      int workers) {
    if (trials < 1000) throw std::invalid_argument("sinr_cdf: trials >= 1000 required");
    return make_cdf(sinr_samples(config, protocol, trials, workers), config.seed);
}

Estimate outage_estimate(const NetworkConfig& config, Protocol protocol, double rate,
                         std::uint64_t trials, int workers) {
    if (trials < 1000) throw std::invalid_argument("outage_estimate: trials >= 1000 required");
    const std::vector<double> s = sinr_samples(config, protocol, trials, workers);
    std::uint64_t below = 0;
    for (double v : s)
        if (0.5 * std::log2(1.0 + v) <= rate) ++below;
    Estimate e;
    e.value = static_cast<double>(below) / static_cast<double>(trials);
    e.stderr_ = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(trials));
    return e;
}

Estimate ergodic_estimate(const NetworkConfig& config, Protocol protocol, std::uint64_t trials,
                          int workers) {
    if (trials < 2) throw std::invalid_argument("ergodic_estimate: trials >= 2 required");
    std::vector<double> mi(trials);
    parallel_trials(trials, workers, [&](std::uint64_t t) {
        const ChannelRealization chan = sample_channels(config, t);
        mi[t] = mutual_information(sinr(config, chan, 0, protocol));
    });
    return mean_stderr(mi);
}

std::vector<double> hermitian_eigenvalues(const linalg::CMatrix& a) {
    if (a.rows != a.cols)
        throw std::invalid_argument("hermitian_eigenvalues: square matrix required");
    if (linalg::hermitian_asymmetry(a) > 1e-10)
        throw std::invalid_argument("hermitian_eigenvalues: input is not Hermitian");
    linalg::CMatrix sym(a.rows, a.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            sym.at(i, j) = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
    return linalg::jacobi_hermitian(std::move(sym), false).values;
}

namespace {

linalg::CMatrix random_gaussian(int rows, int cols, double scale, std::uint64_t seed,
                                std::uint64_t stream, std::uint64_t base) {
    linalg::CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m.at(i, j) = scale * rng::cnormal(seed, stream,
                                              base + static_cast<std::uint64_t>(i) * cols + j);
    return m;
}

// Eigen-decomposition of the relay correlation matrix T through the smaller
// Gram side of F. Returns the K eigenvalues of T; vectors (K x K) only when
// the square root is needed, which requires the K-side Gram.
std::vector<double> t_eigenvalues(const linalg::CMatrix& f, double d, int K) {
    const int M = f.rows;
    std::vector<double> vals;
    if (M <= K) {
        const linalg::CMatrix w = linalg::gram_right(f, d * d / K);  // M x M
        const auto eig = linalg::jacobi_hermitian(w, false);
        vals.assign(static_cast<std::size_t>(K), 0.0);
        for (int i = 0; i < M; ++i) {
            const double l = std::max(0.0, eig.values[static_cast<std::size_t>(i)]);
            vals[static_cast<std::size_t>(K - M + i)] = l / (1.0 + l);
        }
    } else {
        const linalg::CMatrix g = linalg::gram_left(f, d * d / K);  // K x K
        const auto eig = linalg::jacobi_hermitian(g, false);
        vals.resize(static_cast<std::size_t>(K));
        for (int i = 0; i < K; ++i) {
            const double l = std::max(0.0, eig.values[static_cast<std::size_t>(i)]);
            vals[static_cast<std::size_t>(i)] = l / (1.0 + l);
        }
    }
    std::sort(vals.begin(), vals.end());
    return vals;
}

// Eigenvalues of (1/M) H H^H T via T^{1/2} (1/M) H H^H T^{1/2}.
std::vector<double> product_eigenvalues(int M, int K, double d, std::uint64_t seed,
                                        std::uint64_t trial) {
    const linalg::CMatrix f =
        random_gaussian(M, K, 1.0, seed, trial, 0);  // second hop, M x K
    const linalg::CMatrix g = linalg::gram_left(f, d * d / K);  // K x K Gram
    const auto eig = linalg::jacobi_hermitian(g, true);
    std::vector<double> root(eig.values.size());
    for (std::size_t i = 0; i < eig.values.size(); ++i) {
        const double l = std::max(0.0, eig.values[i]);
        root[i] = std::sqrt(l / (1.0 + l));
    }
    const linalg::CMatrix t_half = linalg::spectral_apply(eig, root);

    const linalg::CMatrix h = random_gaussian(
        K, M, 1.0, seed, trial, static_cast<std::uint64_t>(M) * K);  // first hop, K x M
    const linalg::CMatrix b = linalg::multiply(t_half, h);           // K x M
    const linalg::CMatrix a = linalg::gram_right(b, 1.0 / M);        // K x K
    return linalg::jacobi_hermitian(a, false).values;
}

std::vector<double> pool_sorted(std::vector<std::vector<double>>& per_trial) {
    std::vector<double> all;
    for (auto& v : per_trial) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

std::vector<double> esd_mp_samples(int N, int Nprime, double d, std::uint64_t trials,
                                   std::uint64_t seed, int workers) {
    if (N < 1 || Nprime < 1) throw std::invalid_argument("esd_mp_samples: dimensions");
    std::vector<std::vector<double>> per(trials);
    parallel_trials(trials, workers, [&](std::uint64_t t) {
        const linalg::CMatrix x = random_gaussian(N, Nprime, d, seed, t, 0);
        const linalg::CMatrix w = linalg::gram_right(x, 1.0 / Nprime);
        per[t] = linalg::jacobi_hermitian(w, false).values;
    });
    return pool_sorted(per);
}

std::vector<double> esd_t_samples(int M, int K, double d, std::uint64_t trials,
                                  std::uint64_t seed, int workers) {
    if (M < 1 || K < 1) throw std::invalid_argument("esd_t_samples: dimensions");
    std::vector<std::vector<double>> per(trials);
    parallel_trials(trials, workers, [&](std::uint64_t t) {
        const linalg::CMatrix f = random_gaussian(M, K, 1.0, seed, t, 0);
        per[t] = t_eigenvalues(f, d, K);
    });
    return pool_sorted(per);
}

std::vector<double> esd_product_samples(int M, int K, double d, std::uint64_t trials,
                                        std::uint64_t seed, int workers) {
    if (M < 1 || K < 1) throw std::invalid_argument("esd_product_samples: dimensions");
    std::vector<std::vector<double>> per(trials);
    parallel_trials(trials, workers,
                    [&](std::uint64_t t) { per[t] = product_eigenvalues(M, K, d, seed, t); });
    return pool_sorted(per);
}

Estimate af_capacity_mc(int M, int K, double d, double sigma2, std::uint64_t trials,
                        std::uint64_t seed, int workers) {
    if (trials < 10) throw std::invalid_argument("af_capacity_mc: trials >= 10 required");
    if (M < 1 || K < 1) throw std::invalid_argument("af_capacity_mc: dimensions");
    if (!(sigma2 > 0)) throw std::invalid_argument("af_capacity_mc: sigma2 > 0 required");
    std::vector<double> cap(trials);
    parallel_trials(trials, workers, [&](std::uint64_t t) {
        const std::vector<double> lam = product_eigenvalues(M, K, d, seed, t);
        double acc = 0.0;
        for (double l : lam) acc += std::log2(1.0 + std::max(0.0, l) / sigma2);
        cap[t] = acc / (2.0 * M);
    });
    return mean_stderr(cap);
}

double ks_distance(const EmpiricalCdf& emp, const af::DensityCurve& model) {
    if (emp.samples.empty()) throw std::invalid_argument("ks_distance: empty sample set");
    // cumulative trapezoid of the continuous part
    std::vector<double> cum(model.grid.size(), 0.0);
    for (std::size_t i = 1; i < model.grid.size(); ++i)
        cum[i] = cum[i - 1] + 0.5 * (model.values[i] + model.values[i - 1]) *
                                  (model.grid[i] - model.grid[i - 1]);
    auto model_cdf = [&](double x) {
        double v = x >= 0.0 ? model.atom_at_zero : 0.0;
        if (model.grid.empty() || x <= model.grid.front()) return v;
        if (x >= model.grid.back()) return v + cum.back();
        const auto it = std::upper_bound(model.grid.begin(), model.grid.end(), x);
        const std::size_t j = static_cast<std::size_t>(it - model.grid.begin());
        const double x0 = model.grid[j - 1], x1 = model.grid[j];
        const double f0 = model.values[j - 1], f1 = model.values[j];
        const double dx = x - x0;
        const double fmid = f0 + (f1 - f0) * dx / (x1 - x0);
        return v + cum[j - 1] + 0.5 * (f0 + fmid) * dx;
    };

    // Tie blocks matter: at a shared atom both CDFs jump, so the left limit
    // of the empirical CDF must be compared against the left limit of the
    // model, not its right value.
    const double n = static_cast<double>(emp.samples.size());
    double ks = 0.0;
    std::size_t i = 0;
    while (i < emp.samples.size()) {
        const double x = emp.samples[i];
        std::size_t j = i;
        while (j < emp.samples.size() && emp.samples[j] == x) ++j;
        const double fx = model_cdf(x);
        const double fx_left = x == 0.0 ? fx - model.atom_at_zero : fx;
        ks = std::max(ks, std::abs(static_cast<double>(j) / n - fx));
        ks = std::max(ks, std::abs(static_cast<double>(i) / n - fx_left));
        i = j;
    }
    return ks;
}

}  // namespace relaycap::mc
