#pragma once

#include <stdexcept>

#include "coru/corutv.hpp"

namespace coru {

/// Analytical operation count for one CoR-UTV run. c_mult is the cost of one
/// matrix-vector product with the data matrix (2mn for a dense matrix).
struct FlopModel {
    std::size_t m, n, ell;
    int q;
    DVariant variant;
    double c_mult;
    double total;
    int passes;
};

/// Closed-form cost model. Pass c_mult = 0 for the dense default 2mn.
inline FlopModel flop_estimate(std::size_t m, std::size_t n, std::size_t ell, int q,
                               DVariant variant, double c_mult = 0.0) {
    if (m < 1 || n < 1 || ell < 1) throw std::invalid_argument("flop_estimate: positive dims");
    if (ell > std::min(m, n)) throw std::invalid_argument("flop_estimate: ell must be <= min(m,n)");
    if (q < 0) throw std::invalid_argument("flop_estimate: q must be >= 0");
    if (c_mult <= 0.0) c_mult = 2.0 * double(m) * double(n);
    const double md = double(m), nd = double(n), l = double(ell);
    double total;
    int passes;
    if (variant == DVariant::exact) {
        total = (2.0 * q + 3.0) * l * c_mult + 6.0 * md * l * l + nd * l * (2.0 * l + 3.0) +
                8.0 / 3.0 * l * l * l;
        passes = 2 * q + 3;
    } else {
        total = (2.0 * q + 2.0) * l * c_mult + 6.0 * md * l * l + nd * l * (4.0 * l + 3.0) +
                17.0 / 3.0 * l * l * l;
        passes = 2 * q + 2;
    }
    return {m, n, ell, q, variant, c_mult, total, passes};
}

}  // namespace coru
