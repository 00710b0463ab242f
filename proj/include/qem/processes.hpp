// processes.hpp
// Catalog of ready-built machines.

#pragma once

#include <string>
#include <vector>

#include "qem/machine.hpp"

namespace qem {

// Two-state coin that flips with probability p each step; the emitted
// symbol is the new coin face. Requires 0 < p < 1 and p != 0.5 (at 0.5 the
// two states collapse into one).
EpsilonMachine perturbed_coin(double p);

// K independent perturbed coins observed jointly: 2^K states and 2^K
// symbols, each symbol the new lattice configuration encoded as an integer
// with coin 0 in the least significant bit. 1 <= K <= 6.
EpsilonMachine coin_lattice(int k, double p);

// Deterministic alternation of 0s and 1s; the state is the last emitted
// symbol.
EpsilonMachine alternating_switches();

// Single-state i.i.d. coin emitting 1 with probability q, 0 < q < 1.
EpsilonMachine iid_coin(double q);

struct ProcessSpec {
    std::string name;
    std::string params;
    std::string description;
};

const std::vector<ProcessSpec>& process_catalog();

}  // namespace qem
