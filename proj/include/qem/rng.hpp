// rng.hpp
// Seedable deterministic random source. All randomized operations in the
// library take an explicit seed and record it, so every run is reproducible.

#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace qem {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // uniform double in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next_u64() { return engine_(); }

    // uniform integer in [0, n), n >= 1
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// Inverse-CDF draw from a probability vector. Entries must be nonnegative
// and sum to ~1; rounding slack falls to the last positive entry.
int sample_index(std::span<const double> probs, Rng& rng);

}  // namespace qem
