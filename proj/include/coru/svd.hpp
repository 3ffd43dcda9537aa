#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "coru/matrix.hpp"
#include "coru/qr.hpp"

namespace coru {

/// Economy SVD: u is m-by-min(m,n) with orthonormal columns, sigma is
/// non-increasing and non-negative, v is n-by-min(m,n) with orthonormal
/// columns, and a = u·diag(sigma)·v^T. `converged` is false only if the
/// Jacobi sweep cap was hit.
struct SvdFactors {
    Matrix u;
    std::vector<double> sigma;
    Matrix v;
    bool converged = true;
};

namespace detail {

// One-sided Jacobi on a square n-by-n matrix held column-major: columns are
// rotated pairwise until mutually orthogonal, cyclically by (j,k) row order.
// A pair is rotated when |c_j·c_k| > 1e-14·‖c_j‖‖c_k‖; convergence is a full
// sweep with no rotation, capped at 60 sweeps.
inline SvdFactors jacobi_svd_square(std::vector<double> a, std::size_t n, bool& converged) {
    constexpr double kTol = 1e-14;
    constexpr int kMaxSweeps = 60;

    std::vector<double> v(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) v[j * n + j] = 1.0;
    std::vector<double> sq(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        const double* c = a.data() + j * n;
        for (std::size_t i = 0; i < n; ++i) s += c[i] * c[i];
        sq[j] = s;
    }

    converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                double* cj = a.data() + j * n;
                double* ck = a.data() + k * n;
                if (sq[j] == 0.0 || sq[k] == 0.0) continue;
                double gamma = 0.0;
                for (std::size_t i = 0; i < n; ++i) gamma += cj[i] * ck[i];
                if (std::abs(gamma) <= kTol * std::sqrt(sq[j] * sq[k])) continue;
                const double zeta = (sq[k] - sq[j]) / (2.0 * gamma);
                if (!std::isfinite(zeta)) continue;
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                double* vj = v.data() + j * n;
                double* vk = v.data() + k * n;
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = cj[i], y = ck[i];
                    cj[i] = c * x - s * y;
                    ck[i] = s * x + c * y;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = vj[i], y = vk[i];
                    vj[i] = c * x - s * y;
                    vk[i] = s * x + c * y;
                }
                double sj = 0.0, sk = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    sj += cj[i] * cj[i];
                    sk += ck[i] * ck[i];
                }
                sq[j] = sj;
                sq[k] = sk;
                rotated = true;
            }
        }
        if (!rotated) converged = true;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sq[x] > sq[y]; });

    SvdFactors f{Matrix(n, n), std::vector<double>(n), Matrix(n, n), true};
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        const double sigma = std::sqrt(sq[src]);
        f.sigma[j] = sigma;
        const double* vc = v.data() + src * n;
        for (std::size_t i = 0; i < n; ++i) f.v(i, j) = vc[i];
        if (sigma > 0.0) {
            const double* c = a.data() + src * n;
            for (std::size_t i = 0; i < n; ++i) f.u(i, j) = c[i] / sigma;
        }
    }

    // Zero singular values leave u columns undefined; complete them to an
    // orthonormal basis. Sorting puts zero sigmas last, so every column
    // before j is already valid; pick the canonical vector whose residual
    // against them is largest.
    for (std::size_t j = 0; j < n; ++j) {
        if (f.sigma[j] > 0.0) continue;
        double best_res = -1.0;
        std::vector<double> cand(n), best_vec;
        for (std::size_t e = 0; e < n; ++e) {
            std::fill(cand.begin(), cand.end(), 0.0);
            cand[e] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t c = 0; c < j; ++c) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < n; ++i) dot += cand[i] * f.u(i, c);
                    for (std::size_t i = 0; i < n; ++i) cand[i] -= dot * f.u(i, c);
                }
            }
            double res = 0.0;
            for (double x : cand) res += x * x;
            if (res > best_res) {
                best_res = res;
                best_vec = cand;
            }
        }
        const double nrm = std::sqrt(best_res);
        for (std::size_t i = 0; i < n; ++i) f.u(i, j) = best_vec[i] / nrm;
    }
    return f;
}

}  // namespace detail

/// Economy SVD by one-sided Jacobi. Tall inputs are reduced by a QR first;
/// wide inputs dispatch on the transpose.
inline SvdFactors svd(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) {
        SvdFactors f = svd(a.transposed());
        return {std::move(f.v), std::move(f.sigma), std::move(f.u), f.converged};
    }
    bool converged = true;
    if (m > n) {
        QrFactors qr = householder_qr(a);
        std::vector<double> r_cm(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) r_cm[j * n + i] = qr.r(i, j);
        SvdFactors f = detail::jacobi_svd_square(std::move(r_cm), n, converged);
        f.u = matmul(qr.q, f.u);
        f.converged = converged;
        return f;
    }
    std::vector<double> a_cm(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a_cm[j * n + i] = a(i, j);
    SvdFactors f = detail::jacobi_svd_square(std::move(a_cm), n, converged);
    f.converged = converged;
    return f;
}

/// Moore-Penrose pseudo-inverse via the SVD: singular values at or below
/// tol·sigma_1 are dropped.
inline Matrix pinv(const Matrix& a, double tol) {
    SvdFactors f = svd(a);
    const std::size_t r = f.sigma.size();
    Matrix vs(a.cols(), r);  // v·diag(1/sigma or 0)
    const double cut = tol * (f.sigma.empty() ? 0.0 : f.sigma[0]);
    for (std::size_t j = 0; j < r; ++j) {
        const double inv = f.sigma[j] > cut ? 1.0 / f.sigma[j] : 0.0;
        for (std::size_t i = 0; i < a.cols(); ++i) vs(i, j) = f.v(i, j) * inv;
    }
    return matmul(vs, f.u.transposed());
}

inline Matrix pinv(const Matrix& a) {
    const double eps = std::numeric_limits<double>::epsilon();
    return pinv(a, static_cast<double>(std::max(a.rows(), a.cols())) * eps);
}

}  // namespace coru
