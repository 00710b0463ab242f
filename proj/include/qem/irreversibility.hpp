// irreversibility.hpp
// The transition function f over emission configurations and the witness
// search for its failure to be one-to-one. Two distinct states that can
// emit the same symbol and land in the same successor make the machine
// irreversible: part of the information distinguishing them is erased.

#pragma once

#include <compare>
#include <optional>
#include <vector>

#include "qem/machine.hpp"

namespace qem {

struct Configuration {
    int state;
    int symbol;

    auto operator<=>(const Configuration&) const = default;
};

// States j != k both reach state l on symbol r with positive probability.
struct IrreversibilityWitness {
    int j;
    int k;
    int l;
    int r;

    auto operator<=>(const IrreversibilityWitness&) const = default;
};

// All (state, symbol) pairs with a positive transition, in (state, symbol)
// order.
std::vector<Configuration> emission_configurations(const EpsilonMachine& m);

// f(state, symbol) -> (successor, symbol). Throws validation_error when the
// configuration is not a valid emission configuration.
Configuration transition_function(const EpsilonMachine& m, Configuration config);

// The lexicographically smallest witness (j, k, l, r), or nullopt when f is
// one-to-one.
std::optional<IrreversibilityWitness> find_witness(const EpsilonMachine& m);

}  // namespace qem
