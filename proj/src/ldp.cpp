#include "relaycap/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relaycap::ldp {

namespace {
void check_trunc_params(int N, double B, double alpha, double beta, double A) {
    if (N <= 0) throw std::invalid_argument("truncation bound: N > 0 required");
    if (!(B > 0) || !(alpha > 0) || !(beta > 0) || !(A > 0))
        throw std::invalid_argument("truncation bound: B, alpha, beta, A must be positive");
}

void check_threshold(double x, double valid_from) {
    if (x < valid_from)
        throw std::invalid_argument("truncation bound: x below validity threshold");
}
}  // namespace

TailBound hoeffding(int N, const std::vector<std::pair<double, double>>& ranges, double x) {
    if (ranges.empty()) throw std::invalid_argument("hoeffding: empty ranges");
    if (static_cast<std::size_t>(N) != ranges.size())
        throw std::invalid_argument("hoeffding: N must match ranges");
    double denom = 0.0;
    for (auto [a, b] : ranges) {
        if (b < a) throw std::invalid_argument("hoeffding: range with B_n < A_n");
        denom += (b - a) * (b - a);
    }
    if (!(denom > 0)) throw std::invalid_argument("hoeffding: degenerate ranges");
    TailBound t;
    t.exponent_rate = 2.0 * N * static_cast<double>(N) / denom;
    t.power = 2.0;
    t.valid_from = 0.0;
    t.bound = std::exp(-t.exponent_rate * x * x);
    return t;
}

TailBound maurer(int N, const std::vector<double>& second_moments, double x) {
    if (second_moments.empty()) throw std::invalid_argument("maurer: empty moments");
    if (static_cast<std::size_t>(N) != second_moments.size())
        throw std::invalid_argument("maurer: N must match moments");
    double sum = 0.0;
    for (double m2 : second_moments) {
        if (m2 < 0) throw std::invalid_argument("maurer: negative second moment");
        sum += m2;
    }
    if (!(sum > 0)) throw std::invalid_argument("maurer: degenerate moments");
    TailBound t;
    t.exponent_rate = N * static_cast<double>(N) / (2.0 * sum);
    t.power = 2.0;
    t.valid_from = 0.0;
    t.bound = std::exp(-t.exponent_rate * x * x);
    return t;
}

TailBound truncation_bound(int N, double B, double alpha, double beta, double A, double x,
                           double x0) {
    check_trunc_params(N, B, alpha, beta, A);
    TailBound t;
    t.valid_from = x0 > 0 ? std::pow(x0, (2.0 + beta) / 2.0) : 0.0;
    check_threshold(x, t.valid_from);
    t.power = 2.0 * beta / (2.0 + beta);
    t.exponent_rate = std::min(1.0 / (2.0 * A * A), alpha);
    t.bound = 2.0 * std::max(2.0, N * B) * std::exp(-t.exponent_rate * std::pow(x, t.power));
    return t;
}

TailBound truncation_bound_complex(int N, double B, double alpha, double beta, double A,
                                   double x, double x0) {
    check_trunc_params(N, B, alpha, beta, A);
    TailBound t;
    t.valid_from = x0 > 0 ? std::pow(x0, (2.0 + beta) / 2.0) : 0.0;
    check_threshold(x, t.valid_from);
    t.power = 2.0 * beta / (beta + 2.0);
    t.exponent_rate =
        std::min(1.0 / (2.0 * A * A), alpha) * std::pow(2.0, -beta / (beta + 2.0));
    t.bound = 4.0 * std::max(2.0, N * B) * std::exp(-t.exponent_rate * std::pow(x, t.power));
    return t;
}

TailBound truncation_bound_nonneg(int N, double B, double alpha, double beta, double A,
                                  double C, double x, double x0) {
    check_trunc_params(N, B, alpha, beta, A);
    if (!(C > 0)) throw std::invalid_argument("truncation bound: C must be positive");
    TailBound t;
    t.valid_from = x0 > 0 ? std::pow(x0, (2.0 + beta) / 2.0) : 0.0;
    check_threshold(x, t.valid_from);
    t.power = 2.0 * beta / (beta + 2.0);
    t.exponent_rate = std::min({2.0 / (A * A), alpha, 1.0 / (2.0 * A * A * C)});
    t.bound = 3.0 * std::max(1.0, N * B) * std::exp(-t.exponent_rate * std::pow(x, t.power));
    return t;
}

BoundPair combine_sum(const std::vector<BoundPair>& parts) {
    BoundPair out;
    for (const auto& b : parts) {
        out.c += b.c;
        out.p += b.p;
    }
    return out;
}

BoundPair combine_pythagorean(const BoundPair& real_part, const BoundPair& imag_part) {
    return {std::hypot(real_part.c, imag_part.c), real_part.p + imag_part.p};
}

BoundPair combine_mixed_lower(const std::vector<BoundPair>& uppers,
                              const std::vector<BoundPair>& lowers) {
    double cu = 0, cl = 0, p = 0;
    for (const auto& b : uppers) {
        cu += b.c;
        p += b.p;
    }
    for (const auto& b : lowers) {
        cl += b.c;
        p += b.p;
    }
    return {std::max(0.0, cl - cu), p};
}

BoundPair combine_mixed_upper(const std::vector<BoundPair>& uppers,
                              const std::vector<BoundPair>& lowers) {
    double c = 0, p = 0;
    for (const auto& b : uppers) {
        c += b.c;
        p += b.p;
    }
    for (const auto& b : lowers) {
        c += b.c;
        p += b.p;
    }
    return {c, p};
}

BoundPair combine_product(const std::vector<BoundPair>& parts) {
    BoundPair out{1.0, 0.0};
    for (const auto& b : parts) {
        out.c *= b.c;
        out.p += b.p;
    }
    return out;
}

BoundPair combine_fraction(const BoundPair& numerator, const BoundPair& denominator) {
    if (!(denominator.c > 0))
        throw std::invalid_argument("combine_fraction: denominator threshold must be positive");
    return {numerator.c / denominator.c, numerator.p + denominator.p};
}

TailCheckReport empirical_tail_check(const std::function<double(std::uint64_t)>& sampler,
                                     const std::function<TailBound(double)>& bound_fn,
                                     const std::vector<double>& x_grid, std::uint64_t trials) {
    if (trials < 1000) throw std::invalid_argument("empirical_tail_check: trials >= 1000 required");
    std::vector<double> samples(trials);
    for (std::uint64_t t = 0; t < trials; ++t) samples[t] = sampler(t);
    std::sort(samples.begin(), samples.end());

    TailCheckReport rep;
    rep.trials = trials;
    for (double x : x_grid) {
        const auto it = std::lower_bound(samples.begin(), samples.end(), x);
        const double exceed =
            static_cast<double>(samples.end() - it) / static_cast<double>(trials);
        const double b = bound_fn(x).bound;
        const double se = std::sqrt(std::max(exceed * (1.0 - exceed), 1.0 / trials) /
                                    static_cast<double>(trials));
        const bool bad = exceed > b + 3.0 * se;
        rep.x.push_back(x);
        rep.empirical.push_back(exceed);
        rep.bound.push_back(b);
        rep.violated.push_back(bad);
        if (bad) ++rep.violations;
    }
    return rep;
}

}  // namespace relaycap::ldp
