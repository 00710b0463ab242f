// machine.hpp
// Classical epsilon-machines: a unifilar stochastic automaton over causal
// states, with validation, stationary analysis and simulation.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qem/errors.hpp"

namespace qem {

// Tensor entries at or below this floor are structural zeros. Support
// questions (unifilarity, reachability, irreversibility) are decided
// against this floor, not against exact 0, so rounding noise cannot
// create phantom transitions.
inline constexpr double kStructuralFloor = 1e-12;

struct Alphabet {
    std::vector<std::string> symbols;

    int size() const { return static_cast<int>(symbols.size()); }
    int index_of(const std::string& label) const;  // -1 when absent
};

// transitions[j][k][r] is the probability of emitting symbol r while
// moving from state j to state k in one step. Rows (fixed j) sum to 1;
// unifilarity means each (j, r) has at most one positive successor k.
struct EpsilonMachine {
    Alphabet alphabet;
    std::vector<std::string> state_names;
    std::vector<double> transitions;  // dense tensor, n_states^2 * n_symbols

    EpsilonMachine() = default;
    EpsilonMachine(Alphabet a, std::vector<std::string> names);

    int n_states() const { return static_cast<int>(state_names.size()); }
    int n_symbols() const { return alphabet.size(); }

    double t(int j, int k, int r) const {
        return transitions[(static_cast<std::size_t>(j) * n_states() + k) * n_symbols() + r];
    }
    void set_t(int j, int k, int r, double value) {
        transitions[(static_cast<std::size_t>(j) * n_states() + k) * n_symbols() + r] = value;
    }

    // P(r | j), marginalized over successors
    double emission_probability(int j, int r) const;

    // the unique k with t(j,k,r) above the structural floor; -1 when the
    // pair (j, r) cannot occur
    int successor(int j, int r) const;

    int state_index(const std::string& name) const;  // -1 when absent
};

// Reports every broken invariant; an empty result means the machine is a
// valid ergodic epsilon-machine. Never throws.
std::vector<Violation> validate(const EpsilonMachine& m);

// throws validation_error carrying the violation list
void require_valid(const EpsilonMachine& m);

struct StationaryDistribution {
    std::vector<double> p;
};

// Fixed point of the symbol-marginal transition matrix, by damped power
// iteration from the uniform start. Throws numerical_error when iteration
// fails to converge or the fixed-point residual stays above 1e-10 (both
// signal a non-ergodic or ill-conditioned machine).
StationaryDistribution stationary_distribution(const EpsilonMachine& m);

// Shannon entropy of the stationary distribution, in bits.
double statistical_complexity(const EpsilonMachine& m, const StationaryDistribution& stat);

// P(r | state), length n_symbols, sums to 1
std::vector<double> next_symbol_distribution(const EpsilonMachine& m, int state);

struct SymbolSequence {
    std::vector<int> symbols;
    std::uint64_t seed = 0;
    int initial_state = 0;
};

// Emits `length` symbols starting from initial_state; each symbol is drawn
// from the state's emission distribution and the state follows the unique
// unifilar successor. Deterministic given the seed.
SymbolSequence simulate(const EpsilonMachine& m, int initial_state, std::size_t length,
                        std::uint64_t seed);

// True when no two distinct states are probabilistically equivalent
// (equal emission rows and matching successor classes under refinement).
// A non-minimal presentation is a valid automaton but its states are not
// causal states of the process it generates.
bool is_minimal_presentation(const EpsilonMachine& m, double prob_tol = 1e-9);

}  // namespace qem
