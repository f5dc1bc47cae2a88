#include <cmath>
#include <numbers>

#include "doctest.h"
#include "relaycap/coherent.hpp"
#include "relaycap/rng.hpp"

using namespace relaycap;

namespace {

std::vector<cplx> gaussian_vector(const NetworkConfig& cfg, std::uint64_t stream,
                                  std::uint64_t base, int n, double power) {
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            std::sqrt(power) * rng::cnormal(cfg.seed, stream, base + static_cast<std::uint64_t>(i));
    return v;
}

cplx reconstruct(const NetworkConfig& cfg, const SisoDecomposition& d, int m,
                 const std::vector<cplx>& s, const std::vector<cplx>& z,
                 const std::vector<cplx>& w) {
    cplx y = d.effective_gain * s[static_cast<std::size_t>(m)];
    int idx = 0;
    for (int mh = 0; mh < cfg.M; ++mh) {
        if (mh == m) continue;
        y += d.interference_gains[static_cast<std::size_t>(idx++)] * s[static_cast<std::size_t>(mh)];
    }
    for (int k = 0; k < cfg.K; ++k)
        y += d.relay_noise_gains[static_cast<std::size_t>(k)] * z[static_cast<std::size_t>(k)];
    return y + d.dest_noise_gain * w[static_cast<std::size_t>(m)];
}

}  // namespace

TEST_CASE("relay scale P1 hand values") {
    const NetworkConfig cfg = NetworkConfig::uniform_gains(2, 8, 0.01, 1.0);
    CHECK(relay_scale_p1(cfg, 0) == doctest::Approx(0.35180).epsilon(1e-4));
    NetworkConfig quiet = NetworkConfig::uniform_gains(2, 8, 1e-14, 1.0);
    CHECK(relay_scale_p1(quiet, 3) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-9));
    NetworkConfig boosted = NetworkConfig::uniform_gains(2, 8, 0.01, 4.0);
    CHECK(relay_scale_p1(boosted, 0) == doctest::Approx(2.0 * relay_scale_p1(cfg, 0)));
}

TEST_CASE("relay scale P2 hand values") {
    const NetworkConfig cfg = NetworkConfig::uniform_gains(2, 4, 0.01, 1.0);
    CHECK(relay_scale_p2(cfg, 0) == doctest::Approx(1.0 / std::sqrt(8.08)).epsilon(1e-9));
    const NetworkConfig m1 = NetworkConfig::uniform_gains(1, 4, 0.01, 1.0);
    CHECK(relay_scale_p2(m1, 2) == doctest::Approx(relay_scale_p1(m1, 2)).epsilon(1e-12));
    NetworkConfig boosted = NetworkConfig::uniform_gains(2, 4, 0.01, 4.0);
    CHECK(relay_scale_p2(boosted, 0) == doctest::Approx(2.0 * relay_scale_p2(cfg, 0)));
}

TEST_CASE("v-relay scales") {
    NetworkConfig cfg = NetworkConfig::uniform_gains(2, 8, 0.01, 1.0, 1.0, 1.0, 2);
    REQUIRE(cfg.Q == 4);
    CHECK(vrelay_scale_p1(cfg, 0) == doctest::Approx(0.21109).epsilon(1e-4));
    // L = 1 degenerates to the single-antenna scales with Q = K
    NetworkConfig flat = NetworkConfig::uniform_gains(2, 8, 0.01, 1.0, 1.0, 1.0, 1);
    for (int k = 0; k < flat.K; ++k) {
        CHECK(vrelay_scale_p1(flat, k) == doctest::Approx(relay_scale_p1(flat, k)).epsilon(1e-12));
        CHECK(vrelay_scale_p2(flat, k) == doctest::Approx(relay_scale_p2(flat, k)).epsilon(1e-12));
    }
    NetworkConfig boosted = NetworkConfig::uniform_gains(2, 8, 0.01, 4.0, 1.0, 1.0, 2);
    CHECK(vrelay_scale_p1(boosted, 1) == doctest::Approx(2.0 * vrelay_scale_p1(cfg, 1)));
    // non-constant gains within a group are rejected
    NetworkConfig uneven = cfg;
    uneven.E[0] = 1.5;
    uneven.e_hi = 1.5;
    CHECK_THROWS_AS(vrelay_scale_p1(uneven, 0), std::invalid_argument);
}

TEST_CASE("run_chain passes destination noise through and is linear") {
    const NetworkConfig cfg = NetworkConfig::uniform_gains(2, 4, 0.01, 1.0);
    const ChannelRealization chan = sample_channels(cfg, 0);
    const std::vector<cplx> s0(2, cplx{}), z0(4, cplx{});
    std::vector<cplx> w(2);
    w[0] = {0.3, -0.4};
    w[1] = {-1.0, 2.0};
    for (Protocol p : {Protocol::P1, Protocol::P2}) {
        const ChainSignals out = run_chain(cfg, chan, s0, z0, w, p);
        CHECK(out.received[0] == w[0]);
        CHECK(out.received[1] == w[1]);
    }

    const auto s = gaussian_vector(cfg, 3, 100, 2, 0.5);
    const auto z = gaussian_vector(cfg, 3, 200, 4, 0.01);
    const auto wv = gaussian_vector(cfg, 3, 300, 2, 0.01);
    const cplx alpha{0.7, -1.3};
    auto scale = [&](std::vector<cplx> v) {
        for (auto& x : v) x *= alpha;
        return v;
    };
    const ChainSignals a = run_chain(cfg, chan, s, z, wv, Protocol::P1);
    const ChainSignals b = run_chain(cfg, chan, scale(s), scale(z), scale(wv), Protocol::P1);
    for (int m = 0; m < 2; ++m)
        CHECK(std::abs(b.received[static_cast<std::size_t>(m)] -
                       alpha * a.received[static_cast<std::size_t>(m)]) < 1e-12);
}

TEST_CASE("single-link P1 chain collapses to d |h||f| s") {
    const NetworkConfig cfg = NetworkConfig::uniform_gains(1, 1, 0.01, 1.0);
    const ChannelRealization chan = sample_channels(cfg, 5);
    const std::vector<cplx> s{cplx{0.8, -0.2}}, z{cplx{}}, w{cplx{}};
    const ChainSignals out = run_chain(cfg, chan, s, z, w, Protocol::P1);
    const double d = relay_scale_p1(cfg, 0);
    const cplx expected = d * std::abs(chan.h(0, 0)) * std::abs(chan.f(0, 0)) * s[0];
    CHECK(std::abs(out.received[0] - expected) < 1e-14);
}

TEST_CASE("oracle equivalence: decomposition reconstructs the literal chain") {
    int checked = 0;
    for (Protocol p : {Protocol::P1, Protocol::P2, Protocol::P1Coop, Protocol::P2Coop}) {
        for (int M : {2, 4}) {
            for (int K : {4, 8, 12}) {
                const int L = is_cooperative(p) ? 2 : 1;
                if ((K / L) % M != 0) continue;
                const NetworkConfig cfg = NetworkConfig::uniform_gains(M, K, 0.01, 1.0, 1.0, 1.0, L);
                for (std::uint64_t t = 0; t < 5; ++t) {
                    const ChannelRealization chan = sample_channels(cfg, t);
                    const auto s = gaussian_vector(cfg, t, symbol_draw_index(cfg, 0), M, 1.0 / M);
                    const auto z =
                        gaussian_vector(cfg, t, relay_noise_draw_index(cfg, 0), K, cfg.sigma2);
                    const auto w =
                        gaussian_vector(cfg, t, dest_noise_draw_index(cfg, 0), M, cfg.sigma2);
                    const ChainSignals chain = run_chain(cfg, chan, s, z, w, p);
                    for (int m = 0; m < M; ++m) {
                        const SisoDecomposition d = decompose_siso(cfg, chan, m, p);
                        const cplx y = reconstruct(cfg, d, m, s, z, w);
                        const cplx y_ref = chain.received[static_cast<std::size_t>(m)];
                        CHECK(std::abs(y - y_ref) <= 1e-10 * (1.0 + std::abs(y_ref)));
                        ++checked;
                    }
                }
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("M = 1 has no interference terms") {
    const NetworkConfig cfg = NetworkConfig::uniform_gains(1, 4, 0.01, 1.0);
    const ChannelRealization chan = sample_channels(cfg, 0);
    const SisoDecomposition d = decompose_siso(cfg, chan, 0, Protocol::P1);
    CHECK(d.interference_gains.empty());
}

TEST_CASE("P1 own-partition coefficients are nonnegative real") {
    const NetworkConfig cfg = NetworkConfig::uniform_gains(2, 6, 0.01, 1.0);
    const ChannelRealization chan = sample_channels(cfg, 1);
    // relays assigned to link 0 contribute |f||h| terms to its effective gain
    const auto part = relay_partition(cfg.K, cfg.M);
    for (int k = 0; k < cfg.K; ++k) {
        if (part[static_cast<std::size_t>(k)] != 0) continue;
        const cplx ph = std::conj(chan.f(0, k) / std::abs(chan.f(0, k))) * chan.f(0, k);
        CHECK(ph.imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(ph.real() > 0);
    }
}

TEST_CASE("sinr equals the conditional-variance form of the decomposition") {
    for (Protocol p : {Protocol::P1, Protocol::P2}) {
        for (int M : {2, 3}) {
            const int K = 12;
            const NetworkConfig cfg = NetworkConfig::uniform_gains(M, K, 0.01, 1.0);
            for (std::uint64_t t = 0; t < 20; ++t) {
                const ChannelRealization chan = sample_channels(cfg, t);
                const double direct = sinr(cfg, chan, 1, p).value;
                const double via_decomp =
                    sinr_from_decomposition(cfg, decompose_siso(cfg, chan, 1, p));
                CHECK(direct == doctest::Approx(via_decomp).epsilon(1e-12));
                CHECK(direct >= 0);
            }
        }
    }
}

TEST_CASE("global phase rotation leaves the SINR unchanged") {
    const NetworkConfig cfg = NetworkConfig::uniform_gains(3, 6, 0.01, 1.0);
    ChannelRealization chan = sample_channels(cfg, 2);
    const double base = sinr(cfg, chan, 0, Protocol::P1).value;
    const double base2 = sinr(cfg, chan, 0, Protocol::P2).value;
    const cplx rot = std::polar(1.0, 1.234);
    for (auto& v : chan.H) v *= rot;
    for (auto& v : chan.F) v *= rot;
    CHECK(sinr(cfg, chan, 0, Protocol::P1).value == doctest::Approx(base).epsilon(1e-12));
    CHECK(sinr(cfg, chan, 0, Protocol::P2).value == doctest::Approx(base2).epsilon(1e-12));
}

TEST_CASE("cooperative SINR with L = 1 equals the plain protocols") {
    const NetworkConfig cfg = NetworkConfig::uniform_gains(2, 8, 0.01, 1.0, 1.0, 1.0, 1);
    for (std::uint64_t t = 0; t < 10; ++t) {
        const ChannelRealization chan = sample_channels(cfg, t);
        CHECK(sinr_coop(cfg, chan, 0, Protocol::P1Coop).value ==
              doctest::Approx(sinr(cfg, chan, 0, Protocol::P1).value).epsilon(1e-12));
        CHECK(sinr_coop(cfg, chan, 1, Protocol::P2Coop).value ==
              doctest::Approx(sinr(cfg, chan, 1, Protocol::P2).value).epsilon(1e-12));
    }
}

TEST_CASE("mutual information anchor points") {
    CHECK(mutual_information({0.0, Protocol::P1, 0}) == 0.0);
    CHECK(mutual_information({1.0, Protocol::P1, 0}) == doctest::Approx(0.5));
    CHECK(mutual_information({3.0, Protocol::P2, 0}) == doctest::Approx(1.0));
}

TEST_CASE("per-relay power constraint holds empirically") {
    const NetworkConfig cfg = NetworkConfig::uniform_gains(2, 4, 0.01, 1.0);
    const std::uint64_t trials = 100000;
    for (Protocol p : {Protocol::P1, Protocol::P2}) {
        std::vector<double> power(static_cast<std::size_t>(cfg.K), 0.0);
        for (std::uint64_t t = 0; t < trials; ++t) {
            const ChannelRealization chan = sample_channels(cfg, t);
            const auto s = gaussian_vector(cfg, t, symbol_draw_index(cfg, 0), cfg.M, 1.0 / cfg.M);
            const auto z =
                gaussian_vector(cfg, t, relay_noise_draw_index(cfg, 0), cfg.K, cfg.sigma2);
            const std::vector<cplx> w(static_cast<std::size_t>(cfg.M), cplx{});
            const ChainSignals out = run_chain(cfg, chan, s, z, w, p);
            for (int k = 0; k < cfg.K; ++k)
                power[static_cast<std::size_t>(k)] +=
                    std::norm(out.relay_output[static_cast<std::size_t>(k)]);
        }
        const double target = cfg.p_rel / cfg.K;
        for (int k = 0; k < cfg.K; ++k) {
            const double mean = power[static_cast<std::size_t>(k)] / static_cast<double>(trials);
            CHECK(mean == doctest::Approx(target).epsilon(0.02));
        }
    }
}

TEST_CASE("P1 effective-gain terms average to (pi/4) C") {
    const NetworkConfig cfg = NetworkConfig::uniform_gains(2, 8, 0.01, 1.0);
    const double c_ref = std::sqrt(static_cast<double>(cfg.K)) * relay_scale_p1(cfg, 0);
    double acc = 0.0;
    const std::uint64_t n = 1000000;
    for (std::uint64_t i = 0; i < n; ++i)
        acc += rng::rayleigh(9, 0, 2 * i) * rng::rayleigh(9, 0, 2 * i + 1);
    acc /= static_cast<double>(n);
    CHECK(c_ref * acc ==
          doctest::Approx(std::numbers::pi / 4.0 * c_ref).epsilon(0.01));
}
