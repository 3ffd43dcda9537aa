#pragma once

#include <cmath>
#include <numeric>

#include "coru/corutv.hpp"
#include "coru/matrix.hpp"
#include "coru/norms.hpp"
#include "coru/rng.hpp"
#include "coru/svd.hpp"

namespace coru {

/// Rank-revealing and approximation-error diagnostics for one sketch
/// realization: the realized test-matrix norms, the deterministic lower
/// bound on sigma_k(D), the error bound in both norms, and the observed
/// errors of the same run. When psi1_full_rank is false the bound's
/// hypothesis fails and the <= relations are not guaranteed.
struct BoundReport {
    std::size_t k, p, ell;
    int q;
    double sigma_k_a;       // sigma_k(A)
    double sigma_kp1_a;     // sigma_{k+1}(A); interlacing lower half, logged only
    double sigma_lp1_a;     // sigma_{ell-p+1}(A)
    double sigma_k_d;       // sigma_k(D) realized
    double sigma_k_lower_bound;
    double psi2_norm;       // ||psi~_2||_2
    double psi1_pinv_norm;  // ||psi~_1^+||_2
    double alpha, beta, eta, tau;
    double bound_value_fro, bound_value_spec;
    double observed_error_fro, observed_error_spec;
    bool psi1_full_rank;
};

/// Evaluates the realization diagnostics against a precomputed SVD of `a`
/// (which must be the SVD of the same matrix). Requires rows >= cols and
/// 2 <= p + k <= ell < cols.
inline BoundReport bound_report(const Matrix& a, const SvdFactors& a_svd, std::size_t k,
                                std::size_t p, std::size_t ell, int q, RngSeed seed) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) throw std::invalid_argument("bound_report: requires rows >= cols");
    if (ell >= n) throw std::invalid_argument("bound_report: requires ell < cols");
    if (p + k < 2 || p + k > ell)
        throw std::invalid_argument("bound_report: requires 2 <= p + k <= ell");
    if (k < 1) throw std::invalid_argument("bound_report: requires k >= 1");
    if (q < 0) throw std::invalid_argument("bound_report: q must be >= 0");

    const auto& s = a_svd.sigma;
    const double sk = s[k - 1];
    const double skp1 = s[k];
    const double slp1 = s[ell - p];
    const double s1 = s[0];

    // psi~ = V_A^T psi, split into the first ell-p rows and the rest.
    const Matrix psi = gaussian(n, ell, seed);
    const Matrix psit = matmul(a_svd.v.transposed(), psi);
    Matrix psi1(ell - p, ell), psi2(n - ell + p, ell);
    for (std::size_t i = 0; i < ell - p; ++i)
        for (std::size_t j = 0; j < ell; ++j) psi1(i, j) = psit(i, j);
    for (std::size_t i = 0; i < n - ell + p; ++i)
        for (std::size_t j = 0; j < ell; ++j) psi2(i, j) = psit(ell - p + i, j);

    const auto s_psi1 = svd(psi1).sigma;
    const double psi1_min = s_psi1.back(), psi1_max = s_psi1.front();
    const bool full_rank = psi1_min > 1e-12 * psi1_max;
    const double psi1_pinv = psi1_min > 0.0 ? 1.0 / psi1_min
                                            : std::numeric_limits<double>::infinity();
    const double psi2_nrm = svd(psi2).sigma.front();
    const double w = (psi2_nrm * psi1_pinv) * (psi2_nrm * psi1_pinv);

    const double gamma = slp1 / sk;
    const double lower = sk / std::sqrt(1.0 + w * std::pow(gamma, 4.0 * q + 4.0));

    double alpha, beta, eta, tau;
    if (q == 0) {
        alpha = std::sqrt(double(k)) * slp1 * slp1 / sk;
        beta = slp1 * slp1 / (s1 * sk);
        eta = std::sqrt(double(k)) * slp1;
        tau = slp1 / s1;
    } else {
        const double f = std::pow(gamma, 2.0 * q);
        alpha = std::sqrt(double(k)) * slp1 * slp1 / sk * f;
        beta = slp1 * slp1 / (s1 * sk) * f;
        eta = sk / slp1 * alpha;
        tau = beta / slp1;
    }
    const double extra = std::sqrt(alpha * alpha * w / (1.0 + beta * beta * w)) +
                         std::sqrt(eta * eta * w / (1.0 + tau * tau * w));
    double tail_sq = 0.0;
    for (std::size_t j = k; j < s.size(); ++j) tail_sq += s[j] * s[j];
    const double bound_fro = std::sqrt(tail_sq) + extra;
    const double bound_spec = skp1 + extra;

    // Same seed reproduces the same sketch the bound was evaluated for.
    UtvApprox f = corutv(a, ell, q, DVariant::exact, seed);
    Matrix err = a - reconstruct(f);
    const double obs_fro = frobenius_norm(err);
    const double obs_spec = spectral_norm(err);
    // QRCP is orthogonal times permutation, so sigma(T) = sigma(D).
    const double sk_d = svd(f.t).sigma[k - 1];

    return BoundReport{.k = k,
                       .p = p,
                       .ell = ell,
                       .q = q,
                       .sigma_k_a = sk,
                       .sigma_kp1_a = skp1,
                       .sigma_lp1_a = slp1,
                       .sigma_k_d = sk_d,
                       .sigma_k_lower_bound = lower,
                       .psi2_norm = psi2_nrm,
                       .psi1_pinv_norm = psi1_pinv,
                       .alpha = alpha,
                       .beta = beta,
                       .eta = eta,
                       .tau = tau,
                       .bound_value_fro = bound_fro,
                       .bound_value_spec = bound_spec,
                       .observed_error_fro = obs_fro,
                       .observed_error_spec = obs_spec,
                       .psi1_full_rank = full_rank};
}

inline BoundReport bound_report(const Matrix& a, std::size_t k, std::size_t p, std::size_t ell,
                                int q, RngSeed seed) {
    return bound_report(a, svd(a), k, p, ell, q, seed);
}

}  // namespace coru
