#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "coru/matrix.hpp"
#include "coru/norms.hpp"
#include "coru/qr.hpp"
#include "coru/rng.hpp"

namespace coru {

namespace detail {

/// Orthonormal n-by-k factor: QR of a seeded Gaussian.
inline Matrix random_orthonormal(std::size_t n, std::size_t k, RngSeed seed) {
    return householder_qr(gaussian(n, k, seed)).q;
}

/// s distinct indices drawn uniformly from [0, count) by partial
/// Fisher-Yates over a sparse swap table.
inline std::vector<std::uint64_t> sample_without_replacement(std::uint64_t count, std::uint64_t s,
                                                             RngSeed seed) {
    Xoshiro256pp rng(seed);
    std::unordered_map<std::uint64_t, std::uint64_t> swapped;
    std::vector<std::uint64_t> out;
    out.reserve(s);
    auto at = [&](std::uint64_t i) {
        auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
    };
    for (std::uint64_t i = 0; i < s; ++i) {
        const std::uint64_t j = i + rng.uniform_below(count - i);
        const std::uint64_t vi = at(i), vj = at(j);
        swapped[j] = vi;
        out.push_back(vj);
    }
    return out;
}

}  // namespace detail

/// Noisy low-rank square matrix: rank-k part with singular values on the
/// linear ramp 1 - (j-1)(1 - 1e-9)/(n-1) for j = 1..k (zero beyond k), plus
/// a Gaussian matrix rescaled so its spectral norm is exactly gap·sigma_k.
/// Sub-streams used: stream·4 + {0: U, 1: V, 2: E}.
inline Matrix gen_noisy_lowrank(std::size_t n, std::size_t k, double gap, RngSeed seed) {
    if (k < 1 || k >= n) throw std::invalid_argument("gen_noisy_lowrank: requires 1 <= k < n");
    if (!(gap > 0.0)) throw std::invalid_argument("gen_noisy_lowrank: gap must be > 0");
    const RngSeed base{seed.seed, seed.stream * 4};
    const Matrix u = detail::random_orthonormal(n, k, substream(base, 0));
    const Matrix v = detail::random_orthonormal(n, k, substream(base, 1));
    std::vector<double> s(k);
    for (std::size_t j = 0; j < k; ++j)
        s[j] = 1.0 - double(j) * (1.0 - 1e-9) / double(n - 1);
    Matrix us(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) us(i, j) = u(i, j) * s[j];
    Matrix a = matmul(us, v.transposed());
    Matrix e = gaussian(n, n, substream(base, 2));
    e *= gap * s[k - 1] / spectral_norm(e);
    a += e;
    return a;
}

/// Square matrix with the fast-decay spectrum sigma_j = 1 for j <= k and
/// (j - k + 1)^-2 beyond. Sub-streams: stream·4 + {0: U, 1: V}.
inline Matrix gen_fast_decay(std::size_t n, std::size_t k, RngSeed seed) {
    if (k < 1 || k >= n) throw std::invalid_argument("gen_fast_decay: requires 1 <= k < n");
    const RngSeed base{seed.seed, seed.stream * 4};
    const Matrix u = detail::random_orthonormal(n, n, substream(base, 0));
    const Matrix v = detail::random_orthonormal(n, n, substream(base, 1));
    Matrix us(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double s = j < k ? 1.0 : 1.0 / (double(j + 2 - k) * double(j + 2 - k));
            us(i, j) = u(i, j) * s;
        }
    return matmul(us, v.transposed());
}

struct RpcaInstance {
    Matrix m, l_true, s_true;
};

/// Synthetic robust-PCA instance: l = U·V^T with n-by-r standard Gaussian
/// factors; s has exactly `s` nonzeros at positions drawn uniformly without
/// replacement, each ±amplitude with equal probability; m = l + s.
/// Sub-streams: stream·4 + {0: U, 1: V, 2: positions, 3: signs}.
inline RpcaInstance gen_rpca_instance(std::size_t n, std::size_t r, std::uint64_t s,
                                      double amplitude, RngSeed seed) {
    if (r < 1 || r >= n) throw std::invalid_argument("gen_rpca_instance: requires 1 <= r < n");
    if (s > std::uint64_t(n) * n) throw std::invalid_argument("gen_rpca_instance: s > n^2");
    if (amplitude == 0.0) throw std::invalid_argument("gen_rpca_instance: amplitude must be nonzero");
    const RngSeed base{seed.seed, seed.stream * 4};
    const Matrix gu = gaussian(n, r, substream(base, 0));
    const Matrix gv = gaussian(n, r, substream(base, 1));
    Matrix l = matmul(gu, gv.transposed());
    Matrix sp(n, n);
    const auto idx = detail::sample_without_replacement(std::uint64_t(n) * n, s, substream(base, 2));
    Xoshiro256pp signs(substream(base, 3));
    for (const std::uint64_t pos : idx)
        sp.data()[pos] = (signs.next() >> 63) ? amplitude : -amplitude;
    Matrix m = l;
    m += sp;
    return {std::move(m), std::move(l), std::move(sp)};
}

}  // namespace coru
