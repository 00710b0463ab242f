// quantum_model.hpp
// Quantum causal states, their Gram matrix, and the quantum complexity
// C_q: the von Neumann entropy (bits) of the stationary mixture of the
// quantum causal states.

#pragma once

#include <optional>
#include <vector>

#include "qem/info_measures.hpp"
#include "qem/irreversibility.hpp"
#include "qem/machine.hpp"
#include "qem/numerics.hpp"

namespace qem {

// |S_j> = sum_{k,r} sqrt(T[j][k][r]) |r>|k>. amplitudes[j] is indexed by
// the basis pair (r, k) as r * n_states + k. All amplitudes are
// nonnegative reals, so the whole construction stays in real arithmetic.
struct QuantumCausalStates {
    int n_states = 0;
    int n_symbols = 0;
    std::vector<std::vector<double>> amplitudes;

    int dim() const { return n_states * n_symbols; }
};

QuantumCausalStates build_quantum_states(const EpsilonMachine& m);

// g[j][k] = <S_j|S_k> = sum_{r,l} sqrt(T[j][l][r] T[k][l][r]).
struct GramMatrix {
    Matrix g;
};

GramMatrix gram_matrix(const QuantumCausalStates& q);

struct QuantumComplexityReport {
    std::vector<double> eigenvalues;  // descending; nonzero spectrum of rho
    double c_q = 0.0;                 // bits
};

// C_q from the n_states x n_states matrix D[j][k] = sqrt(p_j p_k) g[j][k],
// which shares its nonzero spectrum with rho = sum_j p_j |S_j><S_j| but
// gives a much smaller eigenproblem. Eigenvalues in [-1e-10, 0) are
// clipped to zero; anything lower is a numerical_error.
QuantumComplexityReport quantum_complexity(const QuantumCausalStates& q,
                                           const StationaryDistribution& stat);

struct TheoremCheck {
    double c_mu = 0.0;
    double c_q = 0.0;
    ExcessEntropyEstimate e;
    std::vector<double> eigenvalues;
    std::optional<IrreversibilityWitness> witness;
    // witness present  => c_q < c_mu - 1e-9
    // witness absent   => |c_q - c_mu| < 1e-9
    bool theorem_holds = false;
};

// Aggregate report: classical complexity, excess entropy, quantum
// complexity, irreversibility witness, and whether the strict-advantage
// statement holds for this machine.
TheoremCheck theorem_check(const EpsilonMachine& m);
TheoremCheck theorem_check(const EpsilonMachine& m, const ExcessEntropyOptions& e_opts);

}  // namespace qem
