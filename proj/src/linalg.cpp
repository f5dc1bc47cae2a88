#include "relaycap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace relaycap::linalg {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix multiply(const CMatrix& x, const CMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("multiply: shape mismatch");
    CMatrix out(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int k = 0; k < x.cols; ++k) {
            const cplx xv = x.at(i, k);
            if (xv == cplx{}) continue;
            const cplx* yrow = &y.a[static_cast<std::size_t>(k) * y.cols];
            cplx* orow = &out.a[static_cast<std::size_t>(i) * out.cols];
            for (int j = 0; j < y.cols; ++j) orow[j] += xv * yrow[j];
        }
    }
    return out;
}

CMatrix gram_right(const CMatrix& x, double scale) {
    CMatrix out(x.rows, x.rows);
    for (int i = 0; i < x.rows; ++i) {
        const cplx* xi = &x.a[static_cast<std::size_t>(i) * x.cols];
        for (int j = 0; j <= i; ++j) {
            const cplx* xj = &x.a[static_cast<std::size_t>(j) * x.cols];
            cplx acc{};
            for (int k = 0; k < x.cols; ++k) acc += xi[k] * std::conj(xj[k]);
            acc *= scale;
            out.at(i, j) = acc;
            out.at(j, i) = std::conj(acc);
        }
        out.at(i, i) = cplx{out.at(i, i).real(), 0.0};
    }
    return out;
}

CMatrix gram_left(const CMatrix& x, double scale) {
    CMatrix out(x.cols, x.cols);
    for (int k = 0; k < x.rows; ++k) {
        const cplx* xk = &x.a[static_cast<std::size_t>(k) * x.cols];
        for (int i = 0; i < x.cols; ++i) {
            const cplx xi = std::conj(xk[i]);
            if (xi == cplx{}) continue;
            cplx* orow = &out.a[static_cast<std::size_t>(i) * out.cols];
            for (int j = 0; j < x.cols; ++j) orow[j] += xi * xk[j];
        }
    }
    for (auto& v : out.a) v *= scale;
    for (int i = 0; i < out.rows; ++i) out.at(i, i) = cplx{out.at(i, i).real(), 0.0};
    return out;
}

double frobenius_norm(const CMatrix& x) {
    double s = 0.0;
    for (const cplx& v : x.a) s += std::norm(v);
    return std::sqrt(s);
}

double off_diagonal_norm(const CMatrix& x) {
    double s = 0.0;
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j)
            if (i != j) s += std::norm(x.at(i, j));
    return std::sqrt(s);
}

double hermitian_asymmetry(const CMatrix& x) {
    double worst = 0.0;
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j <= i; ++j)
            worst = std::max(worst, std::abs(x.at(i, j) - std::conj(x.at(j, i))));
    return worst;
}

EigResult jacobi_hermitian(CMatrix a, bool want_vectors, double rel_tol, int max_sweeps) {
    if (a.rows != a.cols) throw std::invalid_argument("jacobi_hermitian: square matrix required");
    const int n = a.rows;
    EigResult out;
    if (n == 0) return out;

    CMatrix v;
    if (want_vectors) v = CMatrix::identity(n);

    const double fro = frobenius_norm(a);
    const double target = rel_tol * std::max(fro, 1e-300);

    int sweep = 0;
    while (off_diagonal_norm(a) > target) {
        if (++sweep > max_sweeps)
            throw std::runtime_error("jacobi_hermitian: no convergence after max sweeps");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a.at(p, q);
                const double abs_apq = std::abs(apq);
                // Skip threshold well below target/n so skipped entries can
                // never hold the off-diagonal norm above target.
                if (abs_apq <= 0.1 * target / n) continue;

                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const cplx phase = apq / abs_apq;  // e^{i theta}
                // Unitary block J = [[c, s e^{i theta}], [-s e^{-i theta}, c]]
                // with tan chosen to zero the rotated (p, q) entry.
                const double tau = (aqq - app) / (2.0 * abs_apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx s_fwd = s * std::conj(phase);  // s e^{-i theta}
                const cplx s_bwd = s * phase;             // s e^{+i theta}

                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const cplx aip = a.at(i, p);
                    const cplx aiq = a.at(i, q);
                    const cplx nip = c * aip - s_fwd * aiq;
                    const cplx niq = s_bwd * aip + c * aiq;
                    a.at(i, p) = nip;
                    a.at(p, i) = std::conj(nip);
                    a.at(i, q) = niq;
                    a.at(q, i) = std::conj(niq);
                }
                a.at(p, p) = app - t * abs_apq;
                a.at(q, q) = aqq + t * abs_apq;
                a.at(p, q) = cplx{};
                a.at(q, p) = cplx{};

                if (want_vectors) {
                    for (int i = 0; i < n; ++i) {
                        const cplx vip = v.at(i, p);
                        const cplx viq = v.at(i, q);
                        v.at(i, p) = c * vip - s_fwd * viq;
                        v.at(i, q) = s_bwd * vip + c * viq;
                    }
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a.at(i, i).real() < a.at(j, j).real(); });

    out.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.values[static_cast<std::size_t>(i)] = a.at(order[static_cast<std::size_t>(i)],
                                                       order[static_cast<std::size_t>(i)])
                                                      .real();
    if (want_vectors) {
        out.vectors = CMatrix(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                out.vectors.at(i, j) = v.at(i, order[static_cast<std::size_t>(j)]);
    }
    return out;
}

CMatrix spectral_apply(const EigResult& eig, const std::vector<double>& mapped) {
    const int n = eig.vectors.rows;
    if (n == 0 || mapped.size() != eig.values.size())
        throw std::invalid_argument("spectral_apply: need eigenvectors and matching values");
    CMatrix out(n, n);
    for (int j = 0; j < n; ++j) {
        const double w = mapped[static_cast<std::size_t>(j)];
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const cplx vij = eig.vectors.at(i, j);
            if (vij == cplx{}) continue;
            for (int k = 0; k < n; ++k)
                out.at(i, k) += w * vij * std::conj(eig.vectors.at(k, j));
        }
    }
    return out;
}

}  // namespace relaycap::linalg
