#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace inramr::rng {

// Stateless SplitMix64 finalizer; every draw is a pure function of (key, counter).
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Stream purposes keep samples drawn for different roles statistically
/// independent even when keyed by the same element.
enum class Purpose : std::uint64_t {
    id_samples = 1,
    err_samples = 2,
    total_err = 3,
    fit_train = 4,
    fit_heldout = 5,
    fourier_freqs = 6,
    weight_init = 7,
};

/// Counter-based uniform stream. Identical (seed, domain_key, purpose) always
/// reproduces the identical sequence, independent of call site or thread.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t domain_key, Purpose purpose)
        : key_(mix(mix(mix(seed) ^ domain_key) ^ static_cast<std::uint64_t>(purpose))) {}

    std::uint64_t next_u64() { return mix(key_ + counter_++); }

    /// Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Standard normal via Box-Muller (one value per call, no caching).
    double next_normal() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Fold a sequence of integers into a stream key (element coordinates, levels).
inline std::uint64_t fold_key(std::uint64_t acc, std::uint64_t v) { return mix(acc ^ v); }

}  // namespace inramr::rng
