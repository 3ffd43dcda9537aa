#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "coru/matrix.hpp"

namespace coru {

/// Identifies one reproducible random stream. Identical (seed, stream) pairs
/// reproduce identical output on every run.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

inline RngSeed substream(RngSeed s, std::uint64_t offset) {
    return {s.seed, s.stream + offset};
}

/// SplitMix64, used only to expand (seed, stream) into generator state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// xoshiro256++ with the state derived from RngSeed: four SplitMix64(seed)
/// words XORed with four SplitMix64(stream) words.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(RngSeed seed) {
        SplitMix64 a(seed.seed), b(seed.stream);
        bool all_zero = true;
        for (auto& w : s_) {
            w = a.next() ^ b.next();
            all_zero = all_zero && w == 0;
        }
        if (all_zero) s_[0] = 1;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in (0, 1]; never zero, so it is safe under log().
    double uniform_open01() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    /// Unbiased uniform integer in [0, bound) by rejection.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

/// Standard Gaussian samples via Box-Muller on xoshiro256++ output.
/// Each pair of uniforms yields (r·cos θ, r·sin θ), consumed in that order.
class GaussianSampler {
public:
    explicit GaussianSampler(RngSeed seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.uniform_open01();
        const double u2 = rng_.uniform_open01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    Xoshiro256pp rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// rows-by-cols matrix of i.i.d. standard Gaussians, filled row-major.
inline Matrix gaussian(std::size_t rows, std::size_t cols, RngSeed seed) {
    Matrix m(rows, cols);
    GaussianSampler g(seed);
    for (double& x : m.data()) x = g.next();
    return m;
}

}  // namespace coru
