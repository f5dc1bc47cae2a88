#ifndef RELAYCAP_LINALG_HPP
#define RELAYCAP_LINALG_HPP

#include <complex>
#include <vector>

namespace relaycap::linalg {

using cplx = std::complex<double>;

/// Dense row-major complex matrix, just big enough for the Monte Carlo
/// spectral pipeline.
struct CMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;

    CMatrix() = default;
    CMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    cplx& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const cplx& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static CMatrix identity(int n);
};

CMatrix multiply(const CMatrix& x, const CMatrix& y);
/// x * x^H scaled: (scale) * X X^H.
CMatrix gram_right(const CMatrix& x, double scale);
/// x^H * x scaled: (scale) * X^H X.
CMatrix gram_left(const CMatrix& x, double scale);

double frobenius_norm(const CMatrix& x);
double off_diagonal_norm(const CMatrix& x);
double hermitian_asymmetry(const CMatrix& x);

struct EigResult {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // columns; empty when not requested
};

/// Cyclic Jacobi for Hermitian matrices: rotates until the off-diagonal
/// Frobenius norm falls below rel_tol * ||A||_F. Throws on non-convergence.
EigResult jacobi_hermitian(CMatrix a, bool want_vectors, double rel_tol = 1e-12,
                           int max_sweeps = 64);

/// V diag(f(lambda)) V^H for a spectral function f given as mapped values.
CMatrix spectral_apply(const EigResult& eig, const std::vector<double>& mapped);

}  // namespace relaycap::linalg

#endif
