// quantum_sim.hpp
// Exact simulation of the two quantum prediction protocols.
//
// measure_prepare: measure the current quantum causal state in the product
// basis, output the symbol, re-prepare the successor state. A classical
// sampling process in disguise, so it runs on a pure-state fast path.
//
// constant_entropy: apply the channel with Kraus operators B_k = |S_k><k|
// to the successor subsystem, emit one subsystem, trace it out, and keep
// the rest as the next machine state. The machine subsystem entropy stays
// at C_q when started from the stationary mixture. The update never
// consumes measurement results, so this mode is deterministic and
// seed-free.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qem/machine.hpp"
#include "qem/numerics.hpp"
#include "qem/quantum_model.hpp"
#include "qem/rng.hpp"

namespace qem {

// The Kraus operators of the update channel: B_k maps basis vector |k> of
// the state subsystem to the quantum causal state |S_k>.
struct KrausSet {
    QuantumCausalStates states;

    // dense (n_symbols * n_states) x n_states matrix of B_k
    Matrix operator_matrix(int k) const;

    // max-abs deviation of sum_k B_k^T B_k from the identity
    double completeness_deviation() const;
};

KrausSet make_kraus_set(const QuantumCausalStates& q);

struct ProtocolState {
    Matrix rho;  // machine subsystem density matrix, (n_symbols * n_states)^2
    std::vector<std::pair<int, double>> entropy_log;  // (step, bits)
    SymbolSequence emitted;                           // measure_prepare mode only
};

enum class ProtocolMode { measure_prepare, constant_entropy };

struct ProtocolInit {
    bool is_stationary = true;
    int state = 0;

    static ProtocolInit stationary_mixture() { return {true, 0}; }
    static ProtocolInit pure_state(int j) { return {false, j}; }
};

ProtocolState initial_protocol_state(const QuantumCausalStates& q,
                                     const StationaryDistribution& stat, ProtocolInit init);

struct MeasurePrepareOutcome {
    int symbol;
    int next_state;
};

// Born-rule measurement of |S_current> in the product basis: outcome
// (r, k) has probability T[current][k][r].
MeasurePrepareOutcome measure_prepare_step(const QuantumCausalStates& q, int current_state,
                                           Rng& rng);

// One constant-entropy round: build the post-channel state on the enlarged
// system, record the output marginal over symbols, trace out the emitted
// subsystem, and append the entropy of the retained state to the log.
// Throws numerical_error when the step loses more than 1e-8 of trace and
// budget_error when the enlarged system is too big for dense arithmetic.
std::vector<double> constant_entropy_step(ProtocolState& state, const KrausSet& kraus);

// Entry (j, k) is <S'_j|S'_k> - <S_j|S_k>, where |S'_j> is the
// post-channel image of |S_j>. Overlaps never decrease, so all entries
// should be >= -1e-10.
Matrix overlap_monotonicity_check(const QuantumCausalStates& q);

ProtocolState run_protocol(const EpsilonMachine& m, int steps, ProtocolMode mode,
                           std::uint64_t seed,
                           ProtocolInit init = ProtocolInit::stationary_mixture());

}  // namespace qem
