// inference.hpp
// Reconstruct a machine from an observed symbol sequence by grouping
// histories with close conditional future distributions. Deliberately
// simple greedy clustering; the merge tolerance is the user's knob.

#pragma once

#include <string>
#include <vector>

#include "qem/machine.hpp"

namespace qem {

struct InferenceConfig {
    int history_length = 1;   // L
    int future_length = 1;    // F
    double merge_tolerance = 0.05;  // L1 distance between conditional future distributions
    long long min_count = 10;       // histories rarer than this are excluded
};

struct InferenceDiagnostics {
    long long histories_seen = 0;  // distinct histories observed
    long long histories_kept = 0;  // at or above min_count
    int cluster_count = 0;
    std::vector<long long> cluster_occupancy;  // per final state, history occurrences
    std::vector<std::string> repairs;          // unifilarity repairs applied
    std::vector<std::string> dropped;          // clusters outside the kept component
    std::vector<std::string> warnings;
};

struct InferenceResult {
    EpsilonMachine machine;
    InferenceDiagnostics diagnostics;
};

// Histories of length L are processed in lexicographic order and assigned
// to the first cluster whose representative future distribution is within
// merge_tolerance (L1), else they found a new cluster. Transitions are
// estimated from empirical (cluster, symbol) -> cluster counts, repaired
// to unifilarity (all mass to the majority successor), and restricted to
// the heaviest strongly connected component so the result always passes
// validate. Every repair and drop is reported in the diagnostics.
InferenceResult infer_machine(const std::vector<int>& symbols, const Alphabet& alphabet,
                              const InferenceConfig& config);

}  // namespace qem
