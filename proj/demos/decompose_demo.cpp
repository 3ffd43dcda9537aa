// Walks through the core library surface: generate a noisy low-rank matrix,
// factor it with CoR-UTV at a few power-iteration settings, and compare the
// singular value estimates and rank-k errors against the SVD and QRCP.

#include <cstdio>

#include "coru/coru.hpp"

using namespace coru;

int main() {
    const std::size_t n = 200, k = 10, ell = 20;
    const Matrix a = gen_noisy_lowrank(n, k, 0.01, {7, 0});
    const SvdFactors oracle = svd(a);

    std::printf("%4s %12s %12s %12s\n", "j", "sigma_j", "corutv q=0", "corutv q=2");
    const auto est0 = singular_estimates(corutv(a, ell, 0, DVariant::exact, {1, 0}));
    const auto est2 = singular_estimates(corutv(a, ell, 2, DVariant::exact, {1, 0}));
    for (std::size_t j = 0; j < 12; ++j)
        std::printf("%4zu %12.6f %12.6f %12.6f\n", j + 1, oracle.sigma[j], est0[j], est2[j]);

    const UtvApprox f = corutv(a, ell, 2, DVariant::exact, {1, 0});
    const double e_cor = frobenius_norm(a - truncate_rank_k(f, k));
    const double e_svd = frobenius_norm(a - svd_rank_k(a, k));
    const double e_qr = frobenius_norm(a - qrcp_rank_k(a, k));
    std::printf("\nrank-%zu Frobenius error:  corutv %.6f   svd %.6f   qrcp %.6f\n", k, e_cor,
                e_svd, e_qr);

    const FlopModel fm = flop_estimate(n, n, ell, 2, DVariant::exact);
    std::printf("cost model: %.3g flops, %d passes over the data\n", fm.total, fm.passes);
    return 0;
}
