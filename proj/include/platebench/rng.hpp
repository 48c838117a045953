#pragma once

#include <cmath>
#include <cstdint>

namespace platebench {

/// Finalizer of the SplitMix64 generator. Used on its own to derive
/// decorrelated stream keys from (seed, index) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic 64-bit generator with a fixed, portable state update so
/// that identical seeds give identical streams on every platform:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   output = z ^ (z >> 31)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    /// Uniform double in [0, 1): top 53 bits scaled by 2^-53.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]: (top 53 bits + 1) scaled by 2^-53.
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Plain modulo; the bias at 64 bits is
    /// irrelevant for the alphabet-sized draws this toolkit makes.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal deviate via Box-Muller. Consumes exactly two draws:
    /// u1 in (0,1], u2 in [0,1); returns sqrt(-2 ln u1) * cos(2 pi u2).
    double next_normal() {
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace platebench
