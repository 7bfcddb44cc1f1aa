#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace nightforge {

/// splitmix64 mixing step; used to derive per-stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Per-item stream seed from (global seed, item index). Reproducible
/// independent of scheduling or worker count.
inline std::uint64_t derive_stream_seed(std::uint64_t global_seed, std::uint64_t index) {
    return mix64(mix64(global_seed) ^ mix64(index + 0x632BE59BD9B4E019ull));
}

/// Deterministic random stream. The engine is std::mt19937_64 (bit-exact by
/// the standard); all value mappings are spelled out here rather than taken
/// from std distributions, whose outputs are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1): top 53 bits scaled by 2^-53.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]: never returns 0, safe under a logarithm.
    double uniform_open() {
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform_in(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        // Multiply-shift bound; bias is negligible for n << 2^64 and the
        // mapping is fully specified, unlike std::uniform_int_distribution.
        unsigned __int128 m = static_cast<unsigned __int128>(eng_()) * n;
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via Box-Muller (cosine branch, two uniforms per draw).
    double normal() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Fisher-Yates shuffle with the specified index mapping.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace nightforge
