#include "qem/compare.hpp"

#include <cmath>

#include "qem/quantum_model.hpp"
#include "qem/quantum_sim.hpp"

namespace qem {

BlockDistribution block_distribution(const std::vector<int>& symbols, int block_length) {
    if (block_length < 1) throw validation_error("block_distribution: block length must be >= 1");
    if (symbols.size() < static_cast<std::size_t>(block_length))
        throw validation_error("block_distribution: sequence shorter than the block length");

    BlockDistribution out;
    out.block_length = block_length;
    std::string word(static_cast<std::size_t>(block_length), '\0');
    for (std::size_t i = 0; i + block_length <= symbols.size(); ++i) {
        for (int j = 0; j < block_length; ++j)
            word[j] = static_cast<char>(symbols[i + j]);
        ++out.counts[word];
        ++out.total;
    }
    return out;
}

double l1_distance(const BlockDistribution& a, const BlockDistribution& b) {
    if (a.block_length != b.block_length)
        throw validation_error("l1_distance: mismatched block lengths");
    if (a.total == 0 || b.total == 0) throw validation_error("l1_distance: empty distribution");

    double d = 0.0;
    auto ia = a.counts.begin();
    auto ib = b.counts.begin();
    while (ia != a.counts.end() || ib != b.counts.end()) {
        if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
            d += static_cast<double>(ia->second) / a.total;
            ++ia;
        } else if (ia == a.counts.end() || ib->first < ia->first) {
            d += static_cast<double>(ib->second) / b.total;
            ++ib;
        } else {
            d += std::abs(static_cast<double>(ia->second) / a.total -
                          static_cast<double>(ib->second) / b.total);
            ++ia;
            ++ib;
        }
    }
    return d;
}

SequenceGenerator classical_generator(EpsilonMachine m, int initial_state) {
    return [m = std::move(m), initial_state](std::size_t length, std::uint64_t seed) {
        return simulate(m, initial_state, length, seed);
    };
}

SequenceGenerator quantum_generator(EpsilonMachine m, int initial_state) {
    return [m = std::move(m), initial_state](std::size_t length, std::uint64_t seed) {
        const auto q = build_quantum_states(m);
        if (initial_state < 0 || initial_state >= q.n_states)
            throw validation_error("quantum_generator: initial state index out of range");
        SymbolSequence out;
        out.seed = seed;
        out.initial_state = initial_state;
        out.symbols.reserve(length);
        Rng rng(seed);
        int cur = initial_state;
        for (std::size_t i = 0; i < length; ++i) {
            const auto outcome = measure_prepare_step(q, cur, rng);
            out.symbols.push_back(outcome.symbol);
            cur = outcome.next_state;
        }
        return out;
    };
}

EquivalenceResult equivalence_test(const SequenceGenerator& gen_a, const SequenceGenerator& gen_b,
                                   std::size_t n_samples, int block_length, double threshold,
                                   std::uint64_t seed_a, std::uint64_t seed_b) {
    const SymbolSequence sa = gen_a(n_samples, seed_a);
    const SymbolSequence sb = gen_b(n_samples, seed_b);
    const double distance =
        l1_distance(block_distribution(sa.symbols, block_length),
                    block_distribution(sb.symbols, block_length));
    return {distance < threshold, distance, n_samples, block_length};
}

}  // namespace qem
