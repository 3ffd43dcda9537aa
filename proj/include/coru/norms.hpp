#pragma once

#include <cmath>
#include <numeric>

#include "coru/matrix.hpp"
#include "coru/svd.hpp"

namespace coru {

enum class NormKind { spectral, frobenius, nuclear, l1, l0count };

inline double l1_norm(const Matrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += std::abs(x);
    return s;
}

/// Exact count of nonzero entries (generators produce exact zeros).
inline std::size_t l0_count(const Matrix& a) {
    std::size_t c = 0;
    for (double x : a.data()) c += (x != 0.0);
    return c;
}

inline double spectral_norm(const Matrix& a) { return svd(a).sigma.front(); }

inline double nuclear_norm(const Matrix& a) {
    const auto s = svd(a).sigma;
    return std::accumulate(s.begin(), s.end(), 0.0);
}

inline double norm(const Matrix& a, NormKind kind) {
    switch (kind) {
        case NormKind::spectral: return spectral_norm(a);
        case NormKind::frobenius: return frobenius_norm(a);
        case NormKind::nuclear: return nuclear_norm(a);
        case NormKind::l1: return l1_norm(a);
        case NormKind::l0count: return static_cast<double>(l0_count(a));
    }
    return 0.0;
}

}  // namespace coru
