// compare.hpp
// Statistical equivalence testing between symbol-sequence generators via
// L1 distance on sliding-window block distributions.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qem/machine.hpp"

namespace qem {

struct BlockDistribution {
    int block_length = 0;
    // key: one byte per symbol index; std::map keeps iteration deterministic
    std::map<std::string, long long> counts;
    long long total = 0;
};

// Sliding-window counts of all length-b words. Throws validation_error
// when the sequence is shorter than the block length.
BlockDistribution block_distribution(const std::vector<int>& symbols, int block_length);

// sum_w |a(w)/a.total - b(w)/b.total|, in [0, 2]. Throws validation_error
// on mismatched block lengths.
double l1_distance(const BlockDistribution& a, const BlockDistribution& b);

using SequenceGenerator = std::function<SymbolSequence(std::size_t, std::uint64_t)>;

// Classical simulation of the machine.
SequenceGenerator classical_generator(EpsilonMachine m, int initial_state = 0);
// Measure-and-prepare simulation of the machine's quantum model.
SequenceGenerator quantum_generator(EpsilonMachine m, int initial_state = 0);

struct EquivalenceResult {
    bool pass = false;
    double distance = 0.0;
    std::size_t n_samples = 0;
    int block_length = 0;
};

EquivalenceResult equivalence_test(const SequenceGenerator& gen_a, const SequenceGenerator& gen_b,
                                   std::size_t n_samples, int block_length, double threshold,
                                   std::uint64_t seed_a, std::uint64_t seed_b);

// Both generators receive the same seed.
inline EquivalenceResult equivalence_test(const SequenceGenerator& gen_a,
                                          const SequenceGenerator& gen_b, std::size_t n_samples,
                                          int block_length, double threshold, std::uint64_t seed) {
    return equivalence_test(gen_a, gen_b, n_samples, block_length, threshold, seed, seed);
}

}  // namespace qem
