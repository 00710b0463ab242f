// info_measures.hpp
// Excess entropy estimation. The estimator uses the identity that the
// statistical complexity minus the excess entropy equals the conditional
// entropy of the pre-observation causal state given the infinite future,
// approached through exact enumeration of finite observation windows.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qem/machine.hpp"

namespace qem {

// Exact word enumeration is refused beyond this many words.
inline constexpr std::uint64_t kWordEnumerationBudget = std::uint64_t{1} << 24;

// -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0. Throws validation_error
// outside [0, 1].
double binary_entropy(double p);

// H(S_-1 | X_0^t): expected posterior entropy (bits) of the causal state
// the machine was in before emitting, after observing t symbols of the
// stationary process. Exact, by enumeration of all supported length-t
// words. Throws budget_error when |alphabet|^t exceeds the enumeration
// budget.
double conditional_initial_state_entropy(const EpsilonMachine& m,
                                         const StationaryDistribution& stat, int t);

struct ExcessEntropyEstimate {
    double value = 0.0;                            // bits
    std::vector<std::pair<int, double>> trace;     // (t, H(S_-1 | X_0^t))
    bool converged = false;
    int horizon_used = 0;
    bool approximate = false;  // true when the Monte Carlo fallback contributed
};

struct ExcessEntropyOptions {
    double tol = 1e-10;
    int t_max = 20;
    // Horizons whose exact enumeration would exceed the word budget fall
    // back to Monte Carlo when allowed; otherwise the budget error
    // propagates to the caller.
    bool allow_monte_carlo = true;
    std::size_t monte_carlo_samples = 1'000'000;
    std::uint64_t monte_carlo_seed = 0x9e3779b97f4a7c15ull;
    // Hard cap on enumeration work (DFS nodes) per horizon; 0 = unlimited.
    // Exceeding it throws budget_error.
    std::uint64_t node_budget = 0;
};

// E = C_mu - H(S_-1 | X_0^t*), where t* is the smallest horizon at which
// the trace changes by less than tol, else the last computed horizon with
// converged = false.
ExcessEntropyEstimate excess_entropy(const EpsilonMachine& m, const StationaryDistribution& stat,
                                     const ExcessEntropyOptions& opts);
ExcessEntropyEstimate excess_entropy(const EpsilonMachine& m, const StationaryDistribution& stat,
                                     double tol = 1e-10, int t_max = 20);

}  // namespace qem
