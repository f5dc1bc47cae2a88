#include "relaycap/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

#include "relaycap/af.hpp"
#include "relaycap/capacity.hpp"
#include "relaycap/concentration.hpp"
#include "relaycap/montecarlo.hpp"
#include "relaycap/rng.hpp"

namespace relaycap::acceptance {

namespace {

struct Reporter {
    std::ostream& os;
    int failures = 0;
    std::chrono::steady_clock::time_point mark = std::chrono::steady_clock::now();

    void line(int id, bool pass, const std::string& what) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - mark).count();
        char buf[32];
        std::snprintf(buf, sizeof(buf), " [%.1fs]", secs);
        os << (pass ? "[PASS]" : "[FAIL]") << " C" << id << ": " << what << buf << "\n";
        os.flush();
        if (!pass) ++failures;
        mark = std::chrono::steady_clock::now();
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::vector<cplx> gaussian_vector(const NetworkConfig& cfg, std::uint64_t stream,
                                  std::uint64_t base, int n, double power) {
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            std::sqrt(power) * rng::cnormal(cfg.seed, stream, base + static_cast<std::uint64_t>(i));
    return v;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double std_of(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
}

// ---------------------------------------------------------------- C1
bool oracle_equivalence(std::string& detail) {
    double worst = 0.0;
    int instances = 0;
    for (Protocol proto : {Protocol::P1, Protocol::P2}) {
        int count = 0;
        for (int M : {2, 3, 4}) {
            for (int K : {4, 8, 12}) {
                if (proto == Protocol::P1 && K % M != 0) continue;
                const NetworkConfig cfg =
                    NetworkConfig::uniform_gains(M, K, 0.01, 1.0, 1.0, 1.0, 1,
                                                 static_cast<std::uint64_t>(M * 100 + K));
                for (std::uint64_t t = 0; t < 15 && count < 100; ++t, ++count) {
                    const ChannelRealization chan = sample_channels(cfg, t);
                    const auto s = gaussian_vector(cfg, t, symbol_draw_index(cfg, 0), M, 1.0 / M);
                    const auto z =
                        gaussian_vector(cfg, t, relay_noise_draw_index(cfg, 0), K, cfg.sigma2);
                    const auto w =
                        gaussian_vector(cfg, t, dest_noise_draw_index(cfg, 0), M, cfg.sigma2);
                    const ChainSignals chain = run_chain(cfg, chan, s, z, w, proto);
                    for (int m = 0; m < M; ++m) {
                        const SisoDecomposition d = decompose_siso(cfg, chan, m, proto);
                        cplx y = d.effective_gain * s[static_cast<std::size_t>(m)];
                        int idx = 0;
                        for (int mh = 0; mh < M; ++mh)
                            if (mh != m)
                                y += d.interference_gains[static_cast<std::size_t>(idx++)] *
                                     s[static_cast<std::size_t>(mh)];
                        for (int k = 0; k < K; ++k)
                            y += d.relay_noise_gains[static_cast<std::size_t>(k)] *
                                 z[static_cast<std::size_t>(k)];
                        y += w[static_cast<std::size_t>(m)];
                        const cplx ref = chain.received[static_cast<std::size_t>(m)];
                        worst = std::max(worst, std::abs(y - ref) / (1.0 + std::abs(ref)));
                    }
                    ++instances;
                }
            }
        }
        if (count < 100) {
            detail = "not enough instances";
            return false;
        }
    }
    detail = "max relative error " + fmt(worst) + " over " + std::to_string(instances) +
             " instances";
    return worst <= 1e-10;
}

// ---------------------------------------------------------------- C2
struct McMoments {
    double f_bar = 0, var_f = 0, var_w = 0;
};

McMoments mc_moments(const NetworkConfig& cfg, Protocol proto, std::uint64_t trials,
                     int workers) {
    std::vector<cplx> gains(trials);
    std::vector<double> wvar(trials);
    mc::parallel_trials(trials, workers, [&](std::uint64_t t) {
        const ChannelRealization chan = sample_channels(cfg, t);
        const SisoDecomposition d = decompose_siso(cfg, chan, 0, proto);
        gains[t] = d.effective_gain;
        double w = cfg.sigma2;
        for (cplx g : d.interference_gains) w += std::norm(g) / cfg.M;
        for (cplx g : d.relay_noise_gains) w += cfg.sigma2 * std::norm(g);
        wvar[t] = w;
    });
    McMoments m;
    cplx sum{};
    double sq = 0, wacc = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        sum += gains[t];
        sq += std::norm(gains[t]);
        wacc += wvar[t];
    }
    const double n = static_cast<double>(trials);
    m.f_bar = (sum / n).real();
    m.var_f = sq / n - std::norm(sum / n);
    m.var_w = wacc / n;
    return m;
}

bool rel_ok(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

bool moment_formulas(int workers, std::string& detail) {
    const std::uint64_t trials = 100000;
    double worst = 0.0;
    auto track = [&](double formula, double mc_val) {
        worst = std::max(worst, std::abs(formula - mc_val) / std::abs(mc_val));
        return rel_ok(formula, mc_val, 0.02);
    };
    bool ok = true;
    {
        const NetworkConfig cfg = NetworkConfig::uniform_gains(4, 64, 0.01, 1.0, 1.0, 1.0, 1, 11);
        const LinkMoments p1 = p1_moments(cfg);
        const McMoments m1 = mc_moments(cfg, Protocol::P1, trials, workers);
        ok &= track(p1.f_bar, m1.f_bar) & track(p1.var_f_tilde, m1.var_f) &
              track(p1.var_w, m1.var_w);
        const LinkMoments p2 = p2_moments(cfg);
        const McMoments m2 = mc_moments(cfg, Protocol::P2, trials, workers);
        ok &= track(p2.f_bar, m2.f_bar) & track(p2.var_f_tilde, m2.var_f) &
              track(p2.var_w, m2.var_w);
    }
    for (int L : {1, 2, 4}) {
        const NetworkConfig cfg =
            NetworkConfig::uniform_gains(4, 64, 0.01, 1.0, 1.0, 1.0, L, 13 + L);
        const LinkMoments lm = coop_p1_moments(cfg);
        const McMoments mm = mc_moments(cfg, Protocol::P1Coop, trials, workers);
        ok &= track(lm.f_bar, mm.f_bar) & track(lm.var_f_tilde, mm.var_f) &
              track(lm.var_w, mm.var_w);
    }
    detail = "worst relative moment error " + fmt(worst) + " (gate 0.02)";
    return ok;
}

// ---------------------------------------------------------------- C3
bool crystallization(int workers, std::string& detail) {
    const std::uint64_t trials = 10000;
    const double limit = 0.6047;
    std::ostringstream os;
    bool ok = true;
    for (Protocol proto : {Protocol::P1, Protocol::P2}) {
        double prev_ratio = 1e300;
        double med15 = 0.0;
        for (int M : {5, 10, 15}) {
            const int K = proto == Protocol::P1 ? M * M * M : M * M;
            const NetworkConfig cfg =
                NetworkConfig::uniform_gains(M, K, 0.01, 1.0, 1.0, 1.0, 1, 20 + M);
            const std::vector<double> s = mc::sinr_samples(cfg, proto, trials, workers);
            const double med = median_of(s);
            const double ratio = std_of(s) / med;
            ok &= ratio < prev_ratio;
            prev_ratio = ratio;
            if (M == 15) med15 = med;
            os << ' ' << protocol_name(proto) << "/M=" << M << " med=" << fmt(med)
               << " std/med=" << fmt(ratio);
        }
        ok &= std::abs(med15 - limit) <= 0.15 * limit;
    }
    detail = "spread shrinks, M=15 medians within 15% of 0.6047:" + os.str();
    return ok;
}

// ---------------------------------------------------------------- C4 + C5
bool bound_and_outage_validity(int workers, std::string& c4_detail, std::string& c5_detail,
                               bool& c5_ok) {
    const std::uint64_t trials = 10000;
    bool c4_ok = true;
    double worst_margin = -1e300;
    std::vector<double> p1_8_512;
    for (Protocol proto : {Protocol::P1, Protocol::P2}) {
        for (int M : {4, 8}) {
            const int K = M == 4 ? 64 : 512;
            const NetworkConfig cfg =
                NetworkConfig::uniform_gains(M, K, 0.01, 1.0, 1.0, 1.0, 1, 31);
            const GainBounds g = derive_constants(cfg);
            const std::vector<double> s = mc::sinr_samples(cfg, proto, trials, workers);
            if (proto == Protocol::P1 && M == 8) p1_8_512 = s;
            for (double x : {1.0, 2.0, 4.0, 8.0}) {
                const SinrInterval iv = sinr_interval(proto, M, K, x, g, cfg.sigma2);
                std::uint64_t outside = 0;
                for (double v : s)
                    if (v < iv.lower || v > iv.upper) ++outside;
                const double emp = static_cast<double>(outside) / static_cast<double>(trials);
                const double cap = std::min(1.0, iv.fail_prob_bound);
                const double sigma =
                    std::sqrt(std::max(emp * (1.0 - emp), 1.0 / trials) / trials);
                worst_margin = std::max(worst_margin, emp - cap);
                if (emp > cap + 3.0 * sigma) c4_ok = false;
            }
        }
    }
    c4_detail = "empirical exceedance minus clamped bound at worst: " + fmt(worst_margin);

    // C5: outage-bound validity wherever x(R) >= 1. At (8, 512) the regime is
    // empty (x(0) < 1); the non-vacuous companion run uses (2, 2048).
    c5_ok = true;
    int in_regime = 0;
    {
        const NetworkConfig cfg = NetworkConfig::uniform_gains(8, 512, 0.01, 1.0, 1.0, 1.0, 1, 31);
        const GainBounds g = derive_constants(cfg);
        for (double r = 0.0; r <= 0.5001; r += 0.02) {
            const OutageBound ob = outage_bound_p1(8, 512, r, g, cfg.sigma2);
            if (!ob.in_regime) continue;
            ++in_regime;
            std::uint64_t below = 0;
            for (double v : p1_8_512)
                if (0.5 * std::log2(1.0 + v) <= r) ++below;
            const double emp = static_cast<double>(below) / static_cast<double>(trials);
            const double cap = std::min(1.0, ob.p_out_bound);
            const double sigma = std::sqrt(std::max(emp * (1.0 - emp), 1.0 / trials) / trials);
            if (emp > cap + 3.0 * sigma) c5_ok = false;
        }
    }
    int in_regime2 = 0;
    {
        const NetworkConfig cfg =
            NetworkConfig::uniform_gains(2, 2048, 0.01, 1.0, 1.0, 1.0, 1, 32);
        const GainBounds g = derive_constants(cfg);
        const std::vector<double> s = mc::sinr_samples(cfg, Protocol::P1, trials, workers);
        for (double r = 0.0; r <= 3.0001; r += 0.1) {
            const OutageBound ob = outage_bound_p1(2, 2048, r, g, cfg.sigma2);
            if (!ob.in_regime) continue;
            ++in_regime2;
            std::uint64_t below = 0;
            for (double v : s)
                if (0.5 * std::log2(1.0 + v) <= r) ++below;
            const double emp = static_cast<double>(below) / static_cast<double>(trials);
            const double cap = std::min(1.0, ob.p_out_bound);
            const double sigma = std::sqrt(std::max(emp * (1.0 - emp), 1.0 / trials) / trials);
            if (emp > cap + 3.0 * sigma) c5_ok = false;
        }
    }
    c5_detail = "(8,512): " + std::to_string(in_regime) +
                " grid points in regime; (2,2048) companion: " + std::to_string(in_regime2) +
                " points checked";
    return c4_ok;
}

// ---------------------------------------------------------------- C6
bool truncation_toolkit(std::string& detail) {
    const std::uint64_t trials = 100000;
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(1.0 + 0.35 * i);
    int violations = 0;

    for (int N : {10, 100}) {
        // independent nonnegative exponentials vs the nonnegative truncation bound
        auto exp_sampler = [N](std::uint64_t t) {
            double s = 0.0;
            for (int n = 0; n < N; ++n)
                s += rng::exponential(101, t, static_cast<std::uint64_t>(n));
            return std::abs(s - N) / std::sqrt(static_cast<double>(N));
        };
        auto cor2 = [N](double x) { return ldp::truncation_bound_nonneg(N, 1, 1, 1, 1, 2, x); };
        violations += ldp::empirical_tail_check(exp_sampler, cor2, grid, trials).violations;

        // Rayleigh products with uniform phases vs the complex truncation bound
        auto ray_sampler = [N](std::uint64_t t) {
            std::complex<double> s{};
            for (int n = 0; n < N; ++n) {
                const std::uint64_t b = 3 * static_cast<std::uint64_t>(n);
                const double mod = rng::rayleigh(102, t, b) * rng::rayleigh(102, t, b + 1);
                s += mod * std::polar(1.0, 2.0 * std::numbers::pi * rng::uniform01(102, t, b + 2));
            }
            return std::abs(s) / std::sqrt(static_cast<double>(N));
        };
        auto cor1 = [N](double x) { return ldp::truncation_bound_complex(N, 2, 1, 1, 1, x); };
        violations += ldp::empirical_tail_check(ray_sampler, cor1, grid, trials).violations;

        // Rademacher-signed Rayleigh products vs the real truncation bound
        auto sign_sampler = [N](std::uint64_t t) {
            double s = 0.0;
            for (int n = 0; n < N; ++n) {
                const std::uint64_t b = 3 * static_cast<std::uint64_t>(n);
                const double mod = rng::rayleigh(103, t, b) * rng::rayleigh(103, t, b + 1);
                s += (rng::bits(103, t, b + 2) & 1 ? mod : -mod);
            }
            return std::abs(s) / std::sqrt(static_cast<double>(N));
        };
        auto thm10 = [N](double x) { return ldp::truncation_bound(N, 2, 1, 1, 1, x); };
        violations += ldp::empirical_tail_check(sign_sampler, thm10, grid, trials).violations;
    }
    detail = std::to_string(violations) + " flagged violations over 6 family/size combinations";
    return violations == 0;
}

// ---------------------------------------------------------------- C7, C8
bool mp_calibration(int workers, std::string& detail) {
    const auto eig = mc::esd_mp_samples(400, 800, 1.0, 4, 51, workers);
    const double ks = mc::ks_distance(mc::make_cdf(eig, 51), af::mp_density({2.0, 1.0, 0.01}));
    detail = "KS = " + fmt(ks) + " (gate 0.03)";
    return ks <= 0.03;
}

bool t_esd(int workers, std::string& detail) {
    bool ok = true;
    std::ostringstream os;
    for (double beta : {0.5, 2.0}) {
        const int M = 300, K = static_cast<int>(beta * M);
        const std::uint64_t trials = 20;
        const auto eig = mc::esd_t_samples(M, K, 1.0, trials, 52, workers);
        const double ks =
            mc::ks_distance(mc::make_cdf(eig, 52), af::ft_density({beta, 1.0, 0.01}));
        os << " beta=" << fmt(beta) << " KS=" << fmt(ks);
        ok &= ks <= 0.03;
    }
    detail = os.str() + " (gate 0.03)";
    return ok;
}

// ---------------------------------------------------------------- C9
bool quartic_fixed_point(std::string& detail) {
    bool ok = true;
    double worst_q = 0.0, worst_fp = 0.0;
    for (double beta : {0.5, 2.0}) {
        const af::AfParams p{beta, 1.0, 0.01};
        const double xmax = af::support_upper_bound(p);
        int points = 0;
        for (int iy = 0; iy < 10; ++iy) {
            const double y = std::pow(10.0, -4.0 + 4.0 * iy / 9.0);  // 1e-4 .. 1
            for (int ix = 0; ix < 5; ++ix) {
                const double x = xmax * (0.1 + 0.8 * ix / 4.0);
                const af::cplx z{x, y};
                const auto pt = af::stieltjes_G(z, p);
                const af::cplx ghat = (beta - 1.0) / z + beta * pt.G;
                ok &= ghat.imag() > 0.0;
                const auto c = af::quartic_coeffs(z, p);
                double cmax = 1.0;
                for (const auto& v : c) cmax = std::max(cmax, std::abs(v));
                const af::cplx pv = (((ghat + c[0]) * ghat + c[1]) * ghat + c[2]) * ghat + c[3];
                worst_q = std::max(worst_q, std::abs(pv) / cmax);
                worst_fp = std::max(worst_fp, pt.residual);
                ++points;
            }
        }
        ok &= points == 50;
    }
    ok &= worst_q <= 1e-9 && worst_fp <= 1e-6;
    const double chi = af::atom_integral_constant(4.0);
    ok &= std::abs(chi - 0.375) <= 1e-12;
    detail = "worst quartic residual " + fmt(worst_q) + ", worst fixed-point residual " +
             fmt(worst_fp) + ", atom constant(4) = " + fmt(chi);
    return ok;
}

// ---------------------------------------------------------------- C10
bool product_density_reproduction(int workers, std::string& detail) {
    const af::AfParams p{0.5, 1.0, 0.01};
    const af::DensityCurve curve = af::limiting_density(p);
    const auto eig = mc::esd_product_samples(500, 250, 1.0, 10, 53, workers);
    const double ks = mc::ks_distance(mc::make_cdf(eig, 53), curve);
    const double xmax = af::support_upper_bound(p);
    const bool edge_ok = eig.back() <= 1.05 * xmax;
    detail = "KS = " + fmt(ks) + " (gate 0.05), max eigenvalue " + fmt(eig.back()) +
             " vs bound " + fmt(xmax);
    return ks <= 0.05 && edge_ok;
}

// ---------------------------------------------------------------- C11
bool capacity_curve(int workers, std::string& detail) {
    std::ostringstream os;
    bool ok = true;
    double prev = -1.0;
    for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double c = af::capacity_beta({beta, 1.0, 0.01});
        ok &= c >= prev;
        prev = c;
        os << " C(" << fmt(beta) << ")=" << fmt(c);
    }
    const double c50 = af::capacity_beta({50.0, 1.0, 0.01});
    const double cinf = af::capacity_infty(1.0, 0.01);
    ok &= std::abs(c50 - cinf) <= 0.05 * cinf;
    os << " C(50)=" << fmt(c50) << " C(inf)=" << fmt(cinf);

    const auto mc_est = mc::af_capacity_mc(200, 100, 1.0, 0.01, 25, 54, workers);
    const double c_half = af::capacity_beta({0.5, 1.0, 0.01});
    ok &= std::abs(mc_est.value - c_half) <= 0.03 * c_half;
    os << " MC(200,100)=" << fmt(mc_est.value) << " vs C(0.5)=" << fmt(c_half);
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------- C12
bool density_sanity(std::string& detail) {
    bool ok = true;
    double worst = 0.0;
    auto check = [&](const af::DensityCurve& c) {
        for (double v : c.values) ok &= v >= 0.0;
        const double mass = c.total_mass();
        worst = std::max(worst, std::abs(mass - 1.0));
        ok &= std::abs(mass - 1.0) <= 1e-3;
    };
    for (double beta : {0.5, 1.0, 2.0}) {
        check(af::mp_density({beta, 1.0, 0.01}));
        check(af::ft_density({beta, 1.0, 0.01}));
    }
    for (double beta : {0.5, 2.0}) check(af::limiting_density({beta, 1.0, 0.01}));
    detail = "worst |mass - 1| = " + fmt(worst) + " (gate 1e-3)";
    return ok;
}

}  // namespace

int run_all(std::ostream& out, int workers) {
    Reporter rep{out};
    std::string detail;

    bool ok = oracle_equivalence(detail);
    rep.line(1, ok, "oracle equivalence (SISO decomposition vs literal chain): " + detail);

    ok = moment_formulas(workers, detail);
    rep.line(2, ok, "closed-form link moments vs Monte Carlo: " + detail);

    ok = crystallization(workers, detail);
    rep.line(3, ok, "crystallization trend: " + detail);

    std::string c5_detail;
    bool c5_ok = true;
    ok = bound_and_outage_validity(workers, detail, c5_detail, c5_ok);
    rep.line(4, ok, "concentration interval validity: " + detail);
    rep.line(5, c5_ok, "outage bound validity: " + c5_detail);

    ok = truncation_toolkit(detail);
    rep.line(6, ok, "truncation toolkit empirical tails: " + detail);

    ok = mp_calibration(workers, detail);
    rep.line(7, ok, "Marchenko-Pastur ESD calibration: " + detail);

    ok = t_esd(workers, detail);
    rep.line(8, ok, "relay correlation ESD vs analytic density: " + detail);

    ok = quartic_fixed_point(detail);
    rep.line(9, ok, "quartic / fixed-point residuals on the z-grid: " + detail);

    ok = product_density_reproduction(workers, detail);
    rep.line(10, ok, "limiting product density vs Monte Carlo ESD: " + detail);

    ok = capacity_curve(workers, detail);
    rep.line(11, ok, "AF capacity curve: " + detail);

    ok = density_sanity(detail);
    rep.line(12, ok, "density curves: mass and positivity: " + detail);

    out << (rep.failures == 0 ? "all criteria passed" : std::to_string(rep.failures) +
                                                            " criteria failed")
        << "\n";
    return rep.failures;
}

}  // namespace relaycap::acceptance
