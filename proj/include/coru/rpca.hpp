#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "coru/corutv.hpp"
#include "coru/matrix.hpp"
#include "coru/norms.hpp"
#include "coru/rng.hpp"
#include "coru/svd.hpp"

namespace coru {

/// Entrywise soft threshold sgn(x)·max(|x|-delta, 0); produces exact zeros.
inline Matrix shrink(const Matrix& x, double delta) {
    if (delta < 0.0) throw std::invalid_argument("shrink: delta must be >= 0");
    Matrix out(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x.data()[i];
        const double mag = std::abs(v) - delta;
        out.data()[i] = mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

/// Singular value thresholding u·shrink(sigma)·v^T; returns the matrix and
/// the count of singular values above delta.
inline std::pair<Matrix, std::size_t> svt(const Matrix& x, double delta) {
    if (delta < 0.0) throw std::invalid_argument("svt: delta must be >= 0");
    SvdFactors f = svd(x);
    std::size_t r = 0;
    while (r < f.sigma.size() && f.sigma[r] > delta) ++r;
    if (r == 0) return {Matrix(x.rows(), x.cols()), 0};
    Matrix us(x.rows(), r);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < r; ++j) us(i, j) = f.u(i, j) * (f.sigma[j] - delta);
    return {matmul(us, f.v.left_cols(r).transposed()), r};
}

/// Smallest integer k with ||b||_* <= sqrt(k)·||b||_F, i.e.
/// ceil((||b||_*/||b||_F)^2); zero matrix gives 0. A 1e-9 slack absorbs
/// roundoff when the ratio lands exactly on an integer.
inline std::size_t predict_rank(const Matrix& b) {
    const double fro = frobenius_norm(b);
    if (fro == 0.0) return 0;
    const double ratio = nuclear_norm(b) / fro;
    const double k = std::ceil(ratio * ratio - 1e-9);
    return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

enum class RpcaInner { svt_exact, corutv };

/// For the corutv inner: soft applies the exact singular value threshold to
/// the compressed core (SVT of the rank-ell CoR-UTV approximation); hard is
/// the plain truncation operator cor_threshold.
enum class CorutvThresholding { soft, hard };

struct RpcaConfig {
    double lambda = 0.0;  // <= 0: 1/sqrt(max(m,n))
    double mu0 = 0.0;     // <= 0: 1.25/||M||_2
    double rho = 1.5;     // continuation factor
    double mu_bar = 0.0;  // <= 0: mu0·1e7 (cap)
    double tol = 1e-5;
    int max_iter = 50;
    RpcaInner inner = RpcaInner::svt_exact;
    std::size_t corutv_ell = 0;  // 0: predict_rank(iterate) + 2, re-evaluated per iteration
    int corutv_q = 1;
    CorutvThresholding corutv_thresholding = CorutvThresholding::soft;

    void validate() const {
        if (rho <= 1.0) throw std::invalid_argument("RpcaConfig: rho must be > 1");
        if (tol <= 0.0) throw std::invalid_argument("RpcaConfig: tol must be > 0");
        if (max_iter < 1) throw std::invalid_argument("RpcaConfig: max_iter must be >= 1");
        if (corutv_q < 0) throw std::invalid_argument("RpcaConfig: corutv_q must be >= 0");
    }
};

struct RpcaResult {
    Matrix l, s;
    int iterations;
    std::vector<double> residuals;  // zeta_j = ||M - L_j - S_j||_F / ||M||_F
    std::size_t rank_l;             // thresholding count of the final inner step
    std::size_t s_l0;
    bool converged;
    bool ell_clamped;
};

/// Robust PCA by the augmented Lagrange multiplier method with continuation:
/// L-step by singular value thresholding (exact, or through the CoR-UTV
/// compression), S-step by entrywise shrinkage, multiplier update, then
/// mu_{j+1} = min(rho·mu_j, mu_bar). Y_0 = S_0 = 0. Stops when
/// zeta < tol or after max_iter (converged = false, no exception).
inline RpcaResult alm_rpca(const Matrix& m, const RpcaConfig& config, RngSeed seed) {
    config.validate();
    const std::size_t rows = m.rows(), cols = m.cols();
    const double lambda =
        config.lambda > 0.0 ? config.lambda : 1.0 / std::sqrt(double(std::max(rows, cols)));
    const double m_fro = frobenius_norm(m);
    double mu = config.mu0 > 0.0 ? config.mu0 : 1.25 / spectral_norm(m);
    const double mu_bar = config.mu_bar > 0.0 ? config.mu_bar : mu * 1e7;

    Matrix l(rows, cols), s(rows, cols), y(rows, cols);
    std::vector<double> residuals;
    std::size_t rank_l = 0;
    bool converged = false;
    bool ell_clamped = false;
    int it = 0;

    while (it < config.max_iter) {
        ++it;
        const double inv_mu = 1.0 / mu;
        Matrix x = m - s;
        for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += y.data()[i] * inv_mu;

        if (config.inner == RpcaInner::svt_exact) {
            auto [lnew, r] = svt(x, inv_mu);
            l = std::move(lnew);
            rank_l = r;
        } else {
            std::size_t ell = config.corutv_ell != 0 ? config.corutv_ell : predict_rank(x) + 2;
            const std::size_t ell_max = std::min(rows, cols) - 1;
            if (ell > ell_max) {
                ell = ell_max;
                ell_clamped = true;
            }
            if (ell < 1) ell = 1;
            const RngSeed iter_seed = substream(seed, static_cast<std::uint64_t>(it));
            if (config.corutv_thresholding == CorutvThresholding::hard) {
                auto [lnew, r] = cor_threshold(x, inv_mu, ell, config.corutv_q, iter_seed);
                l = std::move(lnew);
                rank_l = r;
            } else {
                detail::SketchBases sb = detail::sketch_bases(x, ell, config.corutv_q, iter_seed);
                const Matrix d = matmul(matmul(sb.q1.transposed(), x), sb.q2);
                auto [dthr, r] = svt(d, inv_mu);
                rank_l = r;
                l = r == 0 ? Matrix(rows, cols) : matmul(matmul(sb.q1, dthr), sb.q2.transposed());
            }
        }

        Matrix w = m - l;
        for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] += y.data()[i] * inv_mu;
        s = shrink(w, lambda * inv_mu);

        Matrix resid = m - l;
        resid -= s;
        for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] += mu * resid.data()[i];
        mu = std::min(config.rho * mu, mu_bar);

        const double zeta = frobenius_norm(resid) / m_fro;
        residuals.push_back(zeta);
        if (zeta < config.tol) {
            converged = true;
            break;
        }
    }

    std::size_t s_l0 = l0_count(s);
    return RpcaResult{.l = std::move(l),
                      .s = std::move(s),
                      .iterations = it,
                      .residuals = std::move(residuals),
                      .rank_l = rank_l,
                      .s_l0 = s_l0,
                      .converged = converged,
                      .ell_clamped = ell_clamped};
}

}  // namespace coru
