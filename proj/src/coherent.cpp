#include "relaycap/coherent.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relaycap {

namespace {

constexpr double kPi = std::numbers::pi;

inline cplx phase_of(cplx v) {
    const double a = std::abs(v);
    return a > 0 ? v / a : cplx{1.0, 0.0};
}

template <typename T>
T pairwise_impl(const T* data, std::size_t n) {
    if (n <= 8) {
        T acc{};
        for (std::size_t i = 0; i < n; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_impl(data, half) + pairwise_impl(data + half, n - half);
}

void require_coop_groups(const NetworkConfig& config) {
    if (config.L < 1 || config.Q * config.L != config.K)
        throw std::invalid_argument("cooperative processing requires Q*L == K");
}

// Gains must be constant inside a cooperation group.
double group_energy_first_hop(const NetworkConfig& c, int q, int m) {
    const double e0 = c.energy_first_hop(q * c.L, m);
    for (int l = 1; l < c.L; ++l)
        if (c.energy_first_hop(q * c.L + l, m) != e0)
            throw std::invalid_argument("vrelay scale: E not constant within group");
    return e0;
}

double group_energy_second_hop(const NetworkConfig& c, int m, int q) {
    const double p0 = c.energy_second_hop(m, q * c.L);
    for (int l = 1; l < c.L; ++l)
        if (c.energy_second_hop(m, q * c.L + l) != p0)
            throw std::invalid_argument("vrelay scale: P not constant within group");
    return p0;
}

}  // namespace

double pairwise_sum(std::vector<double>& terms) {
    return terms.empty() ? 0.0 : pairwise_impl(terms.data(), terms.size());
}

cplx pairwise_sum(std::vector<cplx>& terms) {
    return terms.empty() ? cplx{} : pairwise_impl(terms.data(), terms.size());
}

const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::P1: return "P1";
        case Protocol::P2: return "P2";
        case Protocol::P1Coop: return "P1-coop";
        case Protocol::P2Coop: return "P2-coop";
    }
    return "?";
}

bool is_cooperative(Protocol p) { return p == Protocol::P1Coop || p == Protocol::P2Coop; }

double relay_scale_p1(const NetworkConfig& config, int k) {
    double esum = 0.0;
    for (int m = 0; m < config.M; ++m) esum += config.energy_first_hop(k, m);
    const double denom =
        (static_cast<double>(config.K) / config.M) * esum + config.K * config.sigma2;
    return std::sqrt(config.p_rel) / std::sqrt(denom);
}

double relay_scale_p2(const NetworkConfig& config, int k) {
    double esum = 0.0;
    for (int m = 0; m < config.M; ++m) esum += config.energy_first_hop(k, m);
    const double denom = static_cast<double>(config.K) * esum +
                         static_cast<double>(config.M) * config.K * config.sigma2;
    return std::sqrt(config.p_rel) / std::sqrt(denom);
}

double vrelay_scale_p1(const NetworkConfig& config, int q) {
    require_coop_groups(config);
    const std::vector<int> part = relay_partition(config.Q, config.M);
    double esum = 0.0;
    for (int m = 0; m < config.M; ++m) esum += group_energy_first_hop(config, q, m);
    const double q_over_m = static_cast<double>(config.Q) / config.M;
    const double denom =
        q_over_m * esum +
        (kPi * (config.L - 1) * q_over_m / 4.0) *
            group_energy_first_hop(config, q, part[static_cast<std::size_t>(q)]) +
        config.Q * config.sigma2;
    return std::sqrt(config.p_rel) / (config.L * std::sqrt(denom));
}

double vrelay_scale_p2(const NetworkConfig& config, int q) {
    require_coop_groups(config);
    double esum = 0.0;
    for (int m = 0; m < config.M; ++m) esum += group_energy_first_hop(config, q, m);
    const double denom = static_cast<double>(config.Q) * esum +
                         (kPi * (config.L - 1) * config.Q / (4.0 * config.M)) * esum +
                         static_cast<double>(config.M) * config.Q * config.sigma2;
    return std::sqrt(config.p_rel) / (config.L * std::sqrt(denom));
}

ChainSignals run_chain(const NetworkConfig& config, const ChannelRealization& chan,
                       const std::vector<cplx>& s, const std::vector<cplx>& z,
                       const std::vector<cplx>& w, Protocol protocol) {
    const int M = config.M, K = config.K;
    if (chan.K != K || chan.M != M) throw std::invalid_argument("run_chain: realization shape");
    if (s.size() != static_cast<std::size_t>(M) || z.size() != static_cast<std::size_t>(K) ||
        w.size() != static_cast<std::size_t>(M))
        throw std::invalid_argument("run_chain: vector dimensions");

    ChainSignals out;
    out.relay_input.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        cplx r{};
        for (int m = 0; m < M; ++m)
            r += std::sqrt(config.energy_first_hop(k, m)) * chan.h(k, m) *
                 s[static_cast<std::size_t>(m)];
        out.relay_input[static_cast<std::size_t>(k)] = r + z[static_cast<std::size_t>(k)];
    }

    out.relay_output.resize(static_cast<std::size_t>(K));
    switch (protocol) {
        case Protocol::P1: {
            const std::vector<int> part = relay_partition(K, M);
            for (int k = 0; k < K; ++k) {
                const int pm = part[static_cast<std::size_t>(k)];
                const cplx u = relay_scale_p1(config, k) * std::conj(phase_of(chan.h(k, pm))) *
                               out.relay_input[static_cast<std::size_t>(k)];
                out.relay_output[static_cast<std::size_t>(k)] =
                    std::conj(phase_of(chan.f(pm, k))) * u;
            }
            break;
        }
        case Protocol::P2: {
            for (int k = 0; k < K; ++k) {
                cplx filt{};
                for (int m = 0; m < M; ++m)
                    filt += std::conj(phase_of(chan.h(k, m))) * std::conj(phase_of(chan.f(m, k)));
                out.relay_output[static_cast<std::size_t>(k)] =
                    relay_scale_p2(config, k) * filt * out.relay_input[static_cast<std::size_t>(k)];
            }
            break;
        }
        case Protocol::P1Coop: {
            require_coop_groups(config);
            const std::vector<int> part = relay_partition(config.Q, config.M);
            for (int q = 0; q < config.Q; ++q) {
                const int pm = part[static_cast<std::size_t>(q)];
                const double dq = vrelay_scale_p1(config, q);
                cplx combined{};
                for (int l = 0; l < config.L; ++l) {
                    const int k = q * config.L + l;
                    combined += std::conj(phase_of(chan.h(k, pm))) *
                                out.relay_input[static_cast<std::size_t>(k)];
                }
                for (int l = 0; l < config.L; ++l) {
                    const int k = q * config.L + l;
                    out.relay_output[static_cast<std::size_t>(k)] =
                        dq * std::conj(phase_of(chan.f(pm, k))) * combined;
                }
            }
            break;
        }
        case Protocol::P2Coop: {
            require_coop_groups(config);
            for (int q = 0; q < config.Q; ++q) {
                const double dq = vrelay_scale_p2(config, q);
                for (int l = 0; l < config.L; ++l)
                    out.relay_output[static_cast<std::size_t>(q * config.L + l)] = cplx{};
                for (int mt = 0; mt < config.M; ++mt) {
                    cplx combined{};
                    for (int l = 0; l < config.L; ++l) {
                        const int k = q * config.L + l;
                        combined += std::conj(phase_of(chan.h(k, mt))) *
                                    out.relay_input[static_cast<std::size_t>(k)];
                    }
                    for (int l = 0; l < config.L; ++l) {
                        const int k = q * config.L + l;
                        out.relay_output[static_cast<std::size_t>(k)] +=
                            dq * std::conj(phase_of(chan.f(mt, k))) * combined;
                    }
                }
            }
            break;
        }
    }

    out.received.resize(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        cplx y{};
        for (int k = 0; k < K; ++k)
            y += std::sqrt(config.energy_second_hop(m, k)) * chan.f(m, k) *
                 out.relay_output[static_cast<std::size_t>(k)];
        out.received[static_cast<std::size_t>(m)] = y + w[static_cast<std::size_t>(m)];
    }
    return out;
}

SisoDecomposition decompose_siso(const NetworkConfig& config, const ChannelRealization& chan,
                                 int m, Protocol protocol) {
    const int M = config.M, K = config.K;
    if (m < 0 || m >= M) throw std::invalid_argument("decompose_siso: link index");

    SisoDecomposition d;
    d.relay_noise_gains.assign(static_cast<std::size_t>(K), cplx{});
    std::vector<cplx> gain(static_cast<std::size_t>(M));  // coefficient of each s_mhat
    std::vector<cplx> terms(static_cast<std::size_t>(K));

    switch (protocol) {
        case Protocol::P1: {
            const std::vector<int> part = relay_partition(K, M);
            // base_k = d_k sqrt(P_{m,k}) f~*_{p(k),k} f_{m,k} h~*_{k,p(k)}
            std::vector<cplx> base(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k) {
                const int pm = part[static_cast<std::size_t>(k)];
                base[static_cast<std::size_t>(k)] =
                    relay_scale_p1(config, k) * std::sqrt(config.energy_second_hop(m, k)) *
                    std::conj(phase_of(chan.f(pm, k))) * chan.f(m, k) *
                    std::conj(phase_of(chan.h(k, pm)));
                d.relay_noise_gains[static_cast<std::size_t>(k)] = base[static_cast<std::size_t>(k)];
            }
            for (int mh = 0; mh < M; ++mh) {
                for (int k = 0; k < K; ++k)
                    terms[static_cast<std::size_t>(k)] =
                        base[static_cast<std::size_t>(k)] *
                        std::sqrt(config.energy_first_hop(k, mh)) * chan.h(k, mh);
                gain[static_cast<std::size_t>(mh)] = pairwise_sum(terms);
            }
            break;
        }
        case Protocol::P2: {
            std::vector<cplx> base(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k) {
                cplx filt{};
                for (int mt = 0; mt < M; ++mt)
                    filt += std::conj(phase_of(chan.f(mt, k))) * std::conj(phase_of(chan.h(k, mt)));
                base[static_cast<std::size_t>(k)] = relay_scale_p2(config, k) *
                                                    std::sqrt(config.energy_second_hop(m, k)) *
                                                    chan.f(m, k) * filt;
                d.relay_noise_gains[static_cast<std::size_t>(k)] = base[static_cast<std::size_t>(k)];
            }
            for (int mh = 0; mh < M; ++mh) {
                for (int k = 0; k < K; ++k)
                    terms[static_cast<std::size_t>(k)] =
                        base[static_cast<std::size_t>(k)] *
                        std::sqrt(config.energy_first_hop(k, mh)) * chan.h(k, mh);
                gain[static_cast<std::size_t>(mh)] = pairwise_sum(terms);
            }
            break;
        }
        case Protocol::P1Coop: {
            require_coop_groups(config);
            const std::vector<int> part = relay_partition(config.Q, config.M);
            std::vector<cplx> qterms(static_cast<std::size_t>(config.Q));
            // per-group common factor d_q sqrt(P^_{m,q}) (f_{m,q}^T f~*_{p(q),q})
            std::vector<cplx> base(static_cast<std::size_t>(config.Q));
            for (int q = 0; q < config.Q; ++q) {
                const int pm = part[static_cast<std::size_t>(q)];
                cplx ffq{};
                for (int l = 0; l < config.L; ++l) {
                    const int k = q * config.L + l;
                    ffq += chan.f(m, k) * std::conj(phase_of(chan.f(pm, k)));
                }
                base[static_cast<std::size_t>(q)] =
                    vrelay_scale_p1(config, q) *
                    std::sqrt(group_energy_second_hop(config, m, q)) * ffq;
                for (int l = 0; l < config.L; ++l) {
                    const int k = q * config.L + l;
                    d.relay_noise_gains[static_cast<std::size_t>(k)] =
                        base[static_cast<std::size_t>(q)] * std::conj(phase_of(chan.h(k, pm)));
                }
            }
            for (int mh = 0; mh < M; ++mh) {
                for (int q = 0; q < config.Q; ++q) {
                    const int pm = part[static_cast<std::size_t>(q)];
                    cplx hhq{};
                    for (int l = 0; l < config.L; ++l) {
                        const int k = q * config.L + l;
                        hhq += std::conj(phase_of(chan.h(k, pm))) * chan.h(k, mh);
                    }
                    qterms[static_cast<std::size_t>(q)] =
                        base[static_cast<std::size_t>(q)] *
                        std::sqrt(group_energy_first_hop(config, q, mh)) * hhq;
                }
                gain[static_cast<std::size_t>(mh)] = pairwise_sum(qterms);
            }
            break;
        }
        case Protocol::P2Coop: {
            require_coop_groups(config);
            std::vector<cplx> qterms(static_cast<std::size_t>(config.Q));
            for (int q = 0; q < config.Q; ++q) {
                const double dq = vrelay_scale_p2(config, q);
                const double rootp = std::sqrt(group_energy_second_hop(config, m, q));
                for (int mt = 0; mt < M; ++mt) {
                    cplx ffq{};
                    for (int l = 0; l < config.L; ++l) {
                        const int k = q * config.L + l;
                        ffq += chan.f(m, k) * std::conj(phase_of(chan.f(mt, k)));
                    }
                    const cplx common = dq * rootp * ffq;
                    for (int l = 0; l < config.L; ++l) {
                        const int k = q * config.L + l;
                        d.relay_noise_gains[static_cast<std::size_t>(k)] +=
                            common * std::conj(phase_of(chan.h(k, mt)));
                    }
                    for (int mh = 0; mh < M; ++mh) {
                        cplx hhq{};
                        for (int l = 0; l < config.L; ++l) {
                            const int k = q * config.L + l;
                            hhq += std::conj(phase_of(chan.h(k, mt))) * chan.h(k, mh);
                        }
                        gain[static_cast<std::size_t>(mh)] +=
                            common * std::sqrt(group_energy_first_hop(config, q, mh)) * hhq;
                    }
                }
            }
            break;
        }
    }

    d.effective_gain = gain[static_cast<std::size_t>(m)];
    d.interference_gains.reserve(static_cast<std::size_t>(M - 1));
    for (int mh = 0; mh < M; ++mh)
        if (mh != m) d.interference_gains.push_back(gain[static_cast<std::size_t>(mh)]);
    return d;
}

double sinr_from_decomposition(const NetworkConfig& config, const SisoDecomposition& d) {
    const double inv_m = 1.0 / config.M;
    const double sig = std::norm(d.effective_gain) * inv_m;
    std::vector<double> interf;
    interf.reserve(d.interference_gains.size());
    for (cplx g : d.interference_gains) interf.push_back(std::norm(g) * inv_m);
    std::vector<double> noise;
    noise.reserve(d.relay_noise_gains.size());
    for (cplx g : d.relay_noise_gains) noise.push_back(std::norm(g));
    const double denom = pairwise_sum(interf) + config.sigma2 * pairwise_sum(noise) +
                         config.sigma2 * d.dest_noise_gain * d.dest_noise_gain;
    return sig / denom;
}

SinrValue sinr(const NetworkConfig& config, const ChannelRealization& chan, int m,
               Protocol protocol) {
    if (is_cooperative(protocol)) return sinr_coop(config, chan, m, protocol);

    const int M = config.M, K = config.K;
    if (m < 0 || m >= M) throw std::invalid_argument("sinr: link index");
    SinrValue out;
    out.protocol = protocol;
    out.link = m;

    std::vector<cplx> asum(static_cast<std::size_t>(M));
    std::vector<double> noise_sq(static_cast<std::size_t>(K));
    std::vector<cplx> terms(static_cast<std::size_t>(K));
    double extra_noise = 0.0;

    if (protocol == Protocol::P1) {
        const std::vector<int> part = relay_partition(K, M);
        const double root_k = std::sqrt(static_cast<double>(K));
        std::vector<cplx> base(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) {
            const int pm = part[static_cast<std::size_t>(k)];
            const double c_small = root_k * relay_scale_p1(config, k) *
                                   std::sqrt(config.energy_second_hop(m, k));
            base[static_cast<std::size_t>(k)] = c_small * std::conj(phase_of(chan.f(pm, k))) *
                                                chan.f(m, k) * std::conj(phase_of(chan.h(k, pm)));
            noise_sq[static_cast<std::size_t>(k)] = std::norm(base[static_cast<std::size_t>(k)]);
        }
        for (int mh = 0; mh < M; ++mh) {
            for (int k = 0; k < K; ++k)
                terms[static_cast<std::size_t>(k)] = base[static_cast<std::size_t>(k)] *
                                                     std::sqrt(config.energy_first_hop(k, mh)) *
                                                     chan.h(k, mh);
            asum[static_cast<std::size_t>(mh)] = pairwise_sum(terms);
        }
        extra_noise = static_cast<double>(K) * M * config.sigma2;
    } else {
        const double root_km = std::sqrt(static_cast<double>(K) * M);
        std::vector<cplx> base(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) {
            cplx filt{};
            for (int mt = 0; mt < M; ++mt)
                filt += std::conj(phase_of(chan.f(mt, k))) * std::conj(phase_of(chan.h(k, mt)));
            const double c_small = root_km * relay_scale_p2(config, k) *
                                   std::sqrt(config.energy_second_hop(m, k));
            base[static_cast<std::size_t>(k)] = c_small * chan.f(m, k) * filt;
            noise_sq[static_cast<std::size_t>(k)] = std::norm(base[static_cast<std::size_t>(k)]);
        }
        for (int mh = 0; mh < M; ++mh) {
            for (int k = 0; k < K; ++k)
                terms[static_cast<std::size_t>(k)] = base[static_cast<std::size_t>(k)] *
                                                     std::sqrt(config.energy_first_hop(k, mh)) *
                                                     chan.h(k, mh);
            asum[static_cast<std::size_t>(mh)] = pairwise_sum(terms);
        }
        extra_noise = static_cast<double>(K) * M * M * config.sigma2;
    }

    std::vector<double> interf;
    interf.reserve(static_cast<std::size_t>(M - 1));
    for (int mh = 0; mh < M; ++mh)
        if (mh != m) interf.push_back(std::norm(asum[static_cast<std::size_t>(mh)]));
    const double denom = pairwise_sum(interf) + config.sigma2 * M * pairwise_sum(noise_sq) +
                         extra_noise;
    out.value = std::norm(asum[static_cast<std::size_t>(m)]) / denom;
    return out;
}

SinrValue sinr_coop(const NetworkConfig& config, const ChannelRealization& chan, int m,
                    Protocol protocol) {
    Protocol p = protocol;
    if (p == Protocol::P1) p = Protocol::P1Coop;
    if (p == Protocol::P2) p = Protocol::P2Coop;
    SinrValue out;
    out.protocol = p;
    out.link = m;
    out.value = sinr_from_decomposition(config, decompose_siso(config, chan, m, p));
    return out;
}

double mutual_information(const SinrValue& s) {
    if (s.value < 0) throw std::invalid_argument("mutual_information: SINR must be >= 0");
    return 0.5 * std::log2(1.0 + s.value);
}

}  // namespace relaycap
