#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "coru/matrix.hpp"
#include "coru/qr.hpp"
#include "coru/rng.hpp"
#include "coru/svd.hpp"

namespace coru {

/// How the compressed core D is formed: exactly (one extra pass over the
/// data) or from the already-computed sketches (single-pass family).
enum class DVariant { exact, approx };

/// Rank-ell UTV approximation u·t·v^T. For rows >= cols inputs t is upper
/// triangular (URV); for rows < cols the factorization is computed on the
/// transpose and t is lower triangular (ULV), flagged by `lower`.
/// |t(j,j)| is non-increasing either way.
struct UtvApprox {
    Matrix u, t, v;
    std::size_t ell;
    int q;
    DVariant variant;
    RngSeed seed;
    bool lower = false;
    /// Set when the QR of the sketch shows severe column collapse
    /// (|R(ell,ell)| <= 1e-14·|R(1,1)|), a known hazard of running power
    /// steps without re-orthonormalization.
    bool conditioning_warning = false;
};

namespace detail {

/// Sketch-and-orthonormalize stage shared by the UTV and SOR pipelines:
/// draws the n-by-ell Gaussian test matrix from `seed`, runs q+1 rounds of
/// c1 = a·c2, c2 = a^T·c1, and returns orthonormal bases for both sides
/// together with the inputs of the single-pass core approximation.
struct SketchBases {
    Matrix q1, q2;
    Matrix c1;
    Matrix c2_prev;  // the sketch that produced the final c1 (non-updated)
    bool conditioning_warning = false;
};

inline SketchBases sketch_bases(const Matrix& a, std::size_t ell, int q, RngSeed seed) {
    const Matrix at = a.transposed();
    Matrix c2 = gaussian(a.cols(), ell, seed);
    Matrix c1(a.rows(), ell);
    Matrix c2_prev(a.cols(), ell);
    for (int i = 0; i <= q; ++i) {
        c1 = matmul(a, c2);
        c2_prev = std::move(c2);
        c2 = matmul(at, c1);
    }
    QrFactors f1 = householder_qr(c1);
    QrFactors f2 = householder_qr(c2);
    const double r00 = std::abs(f1.r(0, 0));
    const double rll = std::abs(f1.r(ell - 1, ell - 1));
    return {std::move(f1.q), std::move(f2.q), std::move(c1), std::move(c2_prev),
            rll <= 1e-14 * r00};
}

inline void check_corutv_params(const Matrix& a, std::size_t ell) {
    if (ell < 1) throw std::invalid_argument("corutv: ell must be >= 1");
    if (ell >= std::min(a.rows(), a.cols()))
        throw std::invalid_argument("corutv: ell must be < min(rows, cols)");
}

}  // namespace detail

/// Compressed randomized UTV decomposition. With q = 0 this is the basic
/// three-pass scheme; q > 0 adds power iterations. The approx variant
/// replaces D = q1^T·a·q2 with q1^T·c1·(q2^T·psi)^+ built from the
/// non-updated sketch, removing the extra pass over the data.
inline UtvApprox corutv(const Matrix& a, std::size_t ell, int q, DVariant variant, RngSeed seed) {
    detail::check_corutv_params(a, ell);
    if (q < 0) throw std::invalid_argument("corutv: q must be >= 0");
    if (a.rows() < a.cols()) {
        UtvApprox f = corutv(a.transposed(), ell, q, variant, seed);
        return {std::move(f.v), f.t.transposed(), std::move(f.u),
                ell,            q,                 variant,
                seed,           true,              f.conditioning_warning};
    }
    detail::SketchBases sb = detail::sketch_bases(a, ell, q, seed);
    Matrix d = (variant == DVariant::exact)
                   ? matmul(matmul(sb.q1.transposed(), a), sb.q2)
                   : matmul(matmul(sb.q1.transposed(), sb.c1),
                            pinv(matmul(sb.q2.transposed(), sb.c2_prev)));
    QrcpFactors cp = qrcp(d);
    Matrix u = matmul(sb.q1, cp.q);
    Matrix v(a.cols(), ell);
    for (std::size_t j = 0; j < ell; ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) v(i, j) = sb.q2(i, cp.perm[j]);
    return {std::move(u), std::move(cp.r), std::move(v), ell,  q,
            variant,      seed,            false,        sb.conditioning_warning};
}

inline Matrix reconstruct(const UtvApprox& f) { return matmul(matmul(f.u, f.t), f.v.transposed()); }

/// Rank-k truncation u(:,1:k)·t(1:k,:)·v^T (columns of t and v instead for
/// the ULV orientation, which is the same formula transposed).
inline Matrix truncate_rank_k(const UtvApprox& f, std::size_t k) {
    if (k < 1 || k > f.ell) throw std::invalid_argument("truncate_rank_k: k out of range");
    if (f.lower) return matmul(matmul(f.u, f.t.left_cols(k)), f.v.left_cols(k).transposed());
    return matmul(matmul(f.u.left_cols(k), f.t.top_rows(k)), f.v.transposed());
}

/// Diagonal magnitudes of t: estimates of the leading ell singular values.
inline std::vector<double> singular_estimates(const UtvApprox& f) {
    std::vector<double> s(f.ell);
    for (std::size_t j = 0; j < f.ell; ++j) s[j] = std::abs(f.t(j, j));
    return s;
}

/// CoR-UTV thresholding: truncate at r = #{ |t(j,j)| > delta }. r = 0 gives
/// the zero matrix.
inline std::pair<Matrix, std::size_t> cor_threshold(const Matrix& a, double delta,
                                                    std::size_t ell, int q, RngSeed seed) {
    if (delta < 0.0) throw std::invalid_argument("cor_threshold: delta must be >= 0");
    UtvApprox f = corutv(a, ell, q, DVariant::exact, seed);
    std::size_t r = 0;
    for (double est : singular_estimates(f))
        if (est > delta) ++r;
    if (r == 0) return {Matrix(a.rows(), a.cols()), 0};
    return {truncate_rank_k(f, r), r};
}

}  // namespace coru
