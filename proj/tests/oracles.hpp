// Test-only oracles, deliberately independent of the library's computation
// paths: a triple-loop matrix product, characteristic-polynomial eigenvalues
// for symmetric matrices up to 4x4, and a 1-D grid proximal search used
// against svt on diagonal instances.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "coru/matrix.hpp"

namespace oracle {

/// Naive j-innermost triple loop, accumulating in a local scalar; shares no
/// code with coru::matmul.
inline coru::Matrix matmul_triple_loop(const coru::Matrix& a, const coru::Matrix& b) {
    coru::Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

/// Monic characteristic polynomial coefficients of a square matrix by the
/// Faddeev-LeVerrier recurrence: returns c so that
/// p(x) = x^d + c[d-1] x^(d-1) + ... + c[0].
inline std::vector<double> charpoly(const coru::Matrix& m) {
    const std::size_t d = m.rows();
    std::vector<double> c(d, 0.0);
    coru::Matrix mk = m;
    for (std::size_t k = 1; k <= d; ++k) {
        if (k > 1) {
            coru::Matrix shifted = mk;
            for (std::size_t i = 0; i < d; ++i) shifted(i, i) += c[d - k + 1];
            mk = matmul_triple_loop(m, shifted);
        }
        double tr = 0.0;
        for (std::size_t i = 0; i < d; ++i) tr += mk(i, i);
        c[d - k] = -tr / double(k);
    }
    return c;
}

inline double polyval(const std::vector<double>& c, double x) {
    double p = 1.0;
    for (std::size_t i = c.size(); i-- > 0;) p = p * x + c[i];
    return p;
}

/// All real roots of a monic polynomial whose roots are known to be real and
/// simple (characteristic polynomial of a generic symmetric matrix), by
/// bisection between the roots of the derivative, recursively.
inline std::vector<double> real_roots(const std::vector<double>& c) {
    const std::size_t d = c.size();
    if (d == 1) return {-c[0]};
    std::vector<double> dc(d - 1);
    for (std::size_t i = 1; i < d; ++i) dc[i - 1] = c[i] * double(i) / double(d);
    std::vector<double> inner = real_roots(dc);
    std::sort(inner.begin(), inner.end());
    double bound = 1.0;
    for (double ci : c) bound = std::max(bound, std::abs(ci));
    bound = 1.0 + bound;
    std::vector<double> edges{-bound};
    edges.insert(edges.end(), inner.begin(), inner.end());
    edges.push_back(bound);
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        double fa = polyval(c, a), fb = polyval(c, b);
        if (fa == 0.0) {
            roots.push_back(a);
            continue;
        }
        if (fa * fb > 0.0) continue;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            const double fm = polyval(c, mid);
            if (fm == 0.0) {
                a = b = mid;
                break;
            }
            if (fa * fm < 0.0) {
                b = mid;
                fb = fm;
            } else {
                a = mid;
                fa = fm;
            }
        }
        roots.push_back(0.5 * (a + b));
    }
    return roots;
}

/// Singular values of a small matrix via the eigenvalues of the Gram matrix
/// of its shorter side (full rank for generic input, so the roots are
/// simple and bisection isolates all of them).
inline std::vector<double> singular_values_charpoly(const coru::Matrix& a) {
    const coru::Matrix gram = a.rows() <= a.cols()
                                  ? matmul_triple_loop(a, a.transposed())
                                  : matmul_triple_loop(a.transposed(), a);
    std::vector<double> lam = real_roots(charpoly(gram));
    std::vector<double> s;
    for (double l : lam) s.push_back(std::sqrt(std::max(l, 0.0)));
    std::sort(s.rbegin(), s.rend());
    return s;
}

/// 1-D grid search for argmin_z delta·|z| + 0.5·(z - x)^2.
inline double prox_abs_grid(double x, double delta, std::size_t points = 400001) {
    const double r = std::abs(x) + 2.0 * delta + 1.0;
    double best = 0.0, best_f = delta * 0.0 + 0.5 * x * x;
    for (std::size_t i = 0; i < points; ++i) {
        const double z = -r + 2.0 * r * double(i) / double(points - 1);
        const double f = delta * std::abs(z) + 0.5 * (z - x) * (z - x);
        if (f < best_f) {
            best_f = f;
            best = z;
        }
    }
    return best;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// ||q^T q - I||_F, the orthonormality residual.
inline double orthonormality_residual(const coru::Matrix& q) {
    coru::Matrix g = matmul_triple_loop(q.transposed(), q);
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return coru::frobenius_norm(g);
}

}  // namespace oracle
