// random_machines.hpp
// Seeded sampler of random unifilar ergodic machines for property tests.

#pragma once

#include <cstdint>

#include "qem/machine.hpp"
#include "qem/rng.hpp"

namespace qem {

struct RandomMachineOptions {
    int min_states = 1;
    int max_states = 5;
    int min_symbols = 2;
    int max_symbols = 3;
    // each (state, symbol) pair is left without a transition with this
    // probability; present pairs get one uniform target and Dirichlet
    // weights per state
    double absent_probability = 1.0 / 3.0;

    // reject presentations with probabilistically equivalent states; such
    // draws are valid automata but their states are not causal states, so
    // complexity statements about them are vacuous
    bool require_minimal = true;

    // reject draws whose excess-entropy enumeration does not converge at
    // (excess_tol, excess_t_max) within the node budget; keeps properties
    // that compare C_mu against the estimate decidable
    bool require_converged_excess = false;
    double excess_tol = 1e-10;
    int excess_t_max = 16;
    std::uint64_t excess_node_budget = std::uint64_t{1} << 22;

    int max_attempts = 200000;
};

// Draws states in [min_states, max_states] and alphabet size in
// [min_symbols, max_symbols] uniformly, then samples a unifilar structure
// and rejects until all enabled filters pass. Deterministic given the Rng
// state. Throws numerical_error when max_attempts is exhausted.
EpsilonMachine random_unifilar_machine(Rng& rng, const RandomMachineOptions& opts = {});

}  // namespace qem
