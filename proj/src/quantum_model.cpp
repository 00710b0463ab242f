#include "qem/quantum_model.hpp"

#include <cmath>

namespace qem {

QuantumCausalStates build_quantum_states(const EpsilonMachine& m) {
    QuantumCausalStates q;
    q.n_states = m.n_states();
    q.n_symbols = m.n_symbols();
    q.amplitudes.assign(q.n_states, std::vector<double>(q.dim(), 0.0));
    for (int j = 0; j < q.n_states; ++j)
        for (int r = 0; r < q.n_symbols; ++r)
            for (int k = 0; k < q.n_states; ++k)
                q.amplitudes[j][static_cast<std::size_t>(r) * q.n_states + k] =
                    std::sqrt(m.t(j, k, r));
    return q;
}

GramMatrix gram_matrix(const QuantumCausalStates& q) {
    const int n = q.n_states;
    Matrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            double dot = 0.0;
            for (int x = 0; x < q.dim(); ++x) dot += q.amplitudes[j][x] * q.amplitudes[k][x];
            g(j, k) = g(k, j) = dot;
        }
    return {std::move(g)};
}

QuantumComplexityReport quantum_complexity(const QuantumCausalStates& q,
                                           const StationaryDistribution& stat) {
    const int n = q.n_states;
    if (static_cast<int>(stat.p.size()) != n)
        throw validation_error("quantum_complexity: stationary size mismatch");

    const GramMatrix gram = gram_matrix(q);
    Matrix d(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) d(j, k) = std::sqrt(stat.p[j] * stat.p[k]) * gram.g(j, k);

    QuantumComplexityReport report;
    report.eigenvalues = jacobi_eigenvalues(std::move(d));

    double sum = 0.0;
    for (double& ev : report.eigenvalues) {
        if (ev < 0.0) {
            if (ev < -1e-10)
                throw numerical_error("quantum_complexity: eigenvalue below -1e-10");
            ev = 0.0;
        }
        sum += ev;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw numerical_error("quantum_complexity: spectrum does not sum to 1 within 1e-10");

    report.c_q = shannon_entropy_bits(report.eigenvalues, 0.0);
    // rounding can push a lone eigenvalue slightly above 1
    if (report.c_q < 0.0 && report.c_q > -1e-12) report.c_q = 0.0;
    return report;
}

TheoremCheck theorem_check(const EpsilonMachine& m, const ExcessEntropyOptions& e_opts) {
    TheoremCheck out;
    const auto stat = stationary_distribution(m);
    out.c_mu = statistical_complexity(m, stat);
    out.e = excess_entropy(m, stat, e_opts);
    out.witness = find_witness(m);

    const auto q = build_quantum_states(m);
    const auto report = quantum_complexity(q, stat);
    out.c_q = report.c_q;
    out.eigenvalues = report.eigenvalues;

    out.theorem_holds = out.witness.has_value() ? (out.c_q < out.c_mu - 1e-9)
                                                : (std::abs(out.c_q - out.c_mu) < 1e-9);
    return out;
}

TheoremCheck theorem_check(const EpsilonMachine& m) {
    return theorem_check(m, ExcessEntropyOptions{});
}

}  // namespace qem
