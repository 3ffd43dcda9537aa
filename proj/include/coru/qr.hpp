#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "coru/matrix.hpp"

namespace coru {

/// Reduced QR: q has orthonormal columns (m-by-n), r is n-by-n upper
/// triangular. By the reflector construction used here each diagonal entry
/// of r equals the norm of the column it reduced, so diag(r) >= 0; no
/// further sign normalization is applied.
struct QrFactors {
    Matrix q, r;
};

/// Column-pivoted QR: a·P = q·r with P the permutation sending column
/// perm[j] of a to position j. |r(j,j)| is non-increasing.
struct QrcpFactors {
    Matrix q, r;
    std::vector<std::size_t> perm;
};

namespace detail {

// Work is column-major m-by-n. Builds the reflector for column j from row j
// down, stores v (v0 normalized to 1) below the diagonal, returns beta and
// writes the new diagonal value in place.
inline double make_reflector(std::vector<double>& w, std::size_t m, std::size_t j, double* col) {
    (void)w;
    double sigma = 0.0;
    for (std::size_t i = j + 1; i < m; ++i) sigma += col[i] * col[i];
    const double x0 = col[j];
    if (sigma == 0.0) return 0.0;  // column already zero below the diagonal
    const double mu = std::sqrt(x0 * x0 + sigma);
    // v = x - mu*e1 in both branches; the x0 > 0 form avoids cancellation
    const double v0 = (x0 <= 0.0) ? x0 - mu : -sigma / (x0 + mu);
    const double beta = 2.0 * v0 * v0 / (sigma + v0 * v0);
    for (std::size_t i = j + 1; i < m; ++i) col[i] /= v0;
    col[j] = mu;
    return beta;
}

// Applies (I - beta v v^T) to a column, v implicit in w(: , j) below the
// diagonal with v0 = 1.
inline void apply_reflector(const double* vcol, double beta, std::size_t m, std::size_t j,
                            double* col) {
    if (beta == 0.0) return;
    double s = col[j];
    for (std::size_t i = j + 1; i < m; ++i) s += vcol[i] * col[i];
    s *= beta;
    col[j] -= s;
    for (std::size_t i = j + 1; i < m; ++i) col[i] -= s * vcol[i];
}

// Accumulates the economy Q (m-by-n) from stored reflectors.
inline Matrix accumulate_q(const std::vector<double>& w, const std::vector<double>& beta,
                           std::size_t m, std::size_t n) {
    std::vector<double> q(m * n, 0.0);  // column-major
    for (std::size_t j = 0; j < n; ++j) q[j * m + j] = 1.0;
    for (std::size_t j = n; j-- > 0;) {
        const double* vcol = w.data() + j * m;
        for (std::size_t c = 0; c < n; ++c) apply_reflector(vcol, beta[j], m, j, q.data() + c * m);
    }
    Matrix out(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = q[j * m + i];
    return out;
}

inline Matrix upper_triangle(const std::vector<double>& w, std::size_t m, std::size_t n) {
    Matrix r(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j && i < n; ++i) r(i, j) = w[j * m + i];
    return r;
}

}  // namespace detail

/// Householder QR of an m>=n matrix. Rank-deficient input is accepted; the
/// corresponding diagonal entries of r are zero.
inline QrFactors householder_qr(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) throw std::invalid_argument("householder_qr: requires rows >= cols");
    std::vector<double> w(m * n);  // column-major working copy
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) w[j * m + i] = a(i, j);
    std::vector<double> beta(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        beta[j] = detail::make_reflector(w, m, j, w.data() + j * m);
        const double* vcol = w.data() + j * m;
        for (std::size_t c = j + 1; c < n; ++c)
            detail::apply_reflector(vcol, beta[j], m, j, w.data() + c * m);
    }
    return {detail::accumulate_q(w, beta, m, n), detail::upper_triangle(w, m, n)};
}

/// Businger-Golub column-pivoted QR of an m>=n matrix. At step j the column
/// of largest updated squared norm is swapped into position j (ties: lowest
/// index). Squared norms are downdated per step and recomputed from the
/// trailing entries once a downdated value drops below 1e-6 of the value at
/// its last full computation.
inline QrcpFactors qrcp(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) throw std::invalid_argument("qrcp: requires rows >= cols");
    std::vector<double> w(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) w[j * m + i] = a(i, j);
    std::vector<double> beta(n, 0.0), colsq(n), base(n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += w[j * m + i] * w[j * m + i];
        colsq[j] = base[j] = s;
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t piv = j;
        for (std::size_t c = j + 1; c < n; ++c)
            if (colsq[c] > colsq[piv]) piv = c;
        if (piv != j) {
            for (std::size_t i = 0; i < m; ++i) std::swap(w[j * m + i], w[piv * m + i]);
            std::swap(colsq[j], colsq[piv]);
            std::swap(base[j], base[piv]);
            std::swap(perm[j], perm[piv]);
        }
        beta[j] = detail::make_reflector(w, m, j, w.data() + j * m);
        const double* vcol = w.data() + j * m;
        for (std::size_t c = j + 1; c < n; ++c) {
            detail::apply_reflector(vcol, beta[j], m, j, w.data() + c * m);
            colsq[c] -= w[c * m + j] * w[c * m + j];
            if (colsq[c] < 1e-6 * base[c]) {
                double s = 0.0;
                for (std::size_t i = j + 1; i < m; ++i) s += w[c * m + i] * w[c * m + i];
                colsq[c] = base[c] = s;
            }
        }
    }
    return {detail::accumulate_q(w, beta, m, n), detail::upper_triangle(w, m, n), std::move(perm)};
}

}  // namespace coru
