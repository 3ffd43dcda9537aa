#pragma once

#include <utility>

#include "coru/corutv.hpp"
#include "coru/matrix.hpp"
#include "coru/qr.hpp"
#include "coru/rng.hpp"
#include "coru/svd.hpp"

namespace coru {

/// u(:,1:k)·diag(sigma_1..k)·v(:,1:k)^T from an existing factorization.
inline Matrix svd_truncate(const SvdFactors& f, std::size_t k) {
    if (k < 1 || k > f.sigma.size()) throw std::invalid_argument("svd_truncate: k out of range");
    Matrix us(f.u.rows(), k);
    for (std::size_t i = 0; i < f.u.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) us(i, j) = f.u(i, j) * f.sigma[j];
    return matmul(us, f.v.left_cols(k).transposed());
}

/// Optimal rank-k approximation via the SVD oracle.
inline Matrix svd_rank_k(const Matrix& a, std::size_t k) {
    if (k < 1 || k > std::min(a.rows(), a.cols()))
        throw std::invalid_argument("svd_rank_k: k out of range");
    return svd_truncate(svd(a), k);
}

/// Rank-k approximation q(:,1:k)·r(1:k,:)·P^T from column-pivoted QR.
inline Matrix qrcp_rank_k(const Matrix& a, std::size_t k) {
    if (k < 1 || k > a.cols()) throw std::invalid_argument("qrcp_rank_k: k out of range");
    QrcpFactors f = qrcp(a);
    Matrix qk_rk = matmul(f.q.left_cols(k), f.r.top_rows(k));
    Matrix out(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out(i, f.perm[j]) = qk_rk(i, j);
    return out;
}

/// Two-sided randomized SVD: both sketches in one pass, the core recovered
/// from q2^T·phi1 by pseudo-inverse, then an exact SVD of the small core.
/// The two test matrices come from the sub-streams (stream, stream+1).
inline SvdFactors tsr_svd(const Matrix& a, std::size_t ell, RngSeed seed) {
    const std::size_t m = a.rows(), n = a.cols();
    if (ell < 1 || ell >= std::min(m, n)) throw std::invalid_argument("tsr_svd: ell out of range");
    const Matrix phi1 = gaussian(n, ell, substream(seed, 0));
    const Matrix phi2 = gaussian(m, ell, substream(seed, 1));
    const Matrix y1 = matmul(a, phi1);
    const Matrix y2 = matmul(a.transposed(), phi2);
    QrFactors f1 = householder_qr(y1);
    QrFactors f2 = householder_qr(y2);
    const Matrix b = matmul(matmul(f1.q.transposed(), y1), pinv(matmul(f2.q.transposed(), phi1)));
    SvdFactors bs = svd(b);
    return {matmul(f1.q, bs.u), std::move(bs.sigma), matmul(f2.q, bs.v), bs.converged};
}

/// Subspace-orbit randomized SVD: the CoR pipeline up to the compressed core
/// D, then an exact rank-k SVD truncation of D lifted back. The same seed
/// draws the same sketch as corutv.
inline Matrix sor_svd(const Matrix& a, std::size_t k, std::size_t ell, int q, RngSeed seed) {
    if (a.rows() < a.cols()) {
        Matrix t = sor_svd(a.transposed(), k, ell, q, seed);
        return t.transposed();
    }
    detail::check_corutv_params(a, ell);
    if (k < 1 || k > ell) throw std::invalid_argument("sor_svd: requires 1 <= k <= ell");
    if (q < 0) throw std::invalid_argument("sor_svd: q must be >= 0");
    detail::SketchBases sb = detail::sketch_bases(a, ell, q, seed);
    const Matrix d = matmul(matmul(sb.q1.transposed(), a), sb.q2);
    return matmul(matmul(sb.q1, svd_truncate(svd(d), k)), sb.q2.transposed());
}

}  // namespace coru
