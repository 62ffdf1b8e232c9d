#pragma once

#include <cstdint>

namespace snns {

/// Counter-based generator: the i-th output is a SplitMix64 finalization of
/// (key, i), so streams are reproducible bit-for-bit on every platform and
/// independent sub-streams can be derived from a (seed, index) pair.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x9E3779B97F4A7C15ULL)) {}

    /// Child stream for trial/point/purpose `index`, independent of this one.
    Rng derive(std::uint64_t index) const { return Rng(mix(key_ + 0xD1B54A32D192ED03ULL * (index + 1))); }

    std::uint64_t next_u64() { return mix(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace snns
