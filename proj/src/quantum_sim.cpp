#include "qem/quantum_sim.hpp"

#include <cmath>

namespace qem {

namespace {

// largest enlarged-system dimension the dense step arithmetic accepts
constexpr int kMaxEnlargedDim = 4096;

void add_outer_product(Matrix& rho, double weight, const std::vector<double>& v) {
    const int d = rho.rows;
    for (int i = 0; i < d; ++i) {
        if (v[i] == 0.0) continue;
        const double wi = weight * v[i];
        for (int j = 0; j < d; ++j) rho(i, j) += wi * v[j];
    }
}

}  // namespace

Matrix KrausSet::operator_matrix(int k) const {
    Matrix b(states.dim(), states.n_states);
    for (int x = 0; x < states.dim(); ++x) b(x, k) = states.amplitudes[k][x];
    return b;
}

double KrausSet::completeness_deviation() const {
    const int n = states.n_states;
    // B_k has a single nonzero column, so B_k^T B_k lands entirely on the
    // (k, k) entry with value <S_k|S_k>
    Matrix acc(n, n);
    for (int k = 0; k < n; ++k) {
        double norm2 = 0.0;
        for (int x = 0; x < states.dim(); ++x)
            norm2 += states.amplitudes[k][x] * states.amplitudes[k][x];
        acc(k, k) = norm2;
    }
    return max_abs_diff(acc, Matrix::identity(n));
}

KrausSet make_kraus_set(const QuantumCausalStates& q) { return {q}; }

ProtocolState initial_protocol_state(const QuantumCausalStates& q,
                                     const StationaryDistribution& stat, ProtocolInit init) {
    ProtocolState state;
    state.rho = Matrix(q.dim(), q.dim());
    if (init.is_stationary) {
        for (int j = 0; j < q.n_states; ++j)
            add_outer_product(state.rho, stat.p[j], q.amplitudes[j]);
    } else {
        if (init.state < 0 || init.state >= q.n_states)
            throw validation_error("initial_protocol_state: state index out of range");
        add_outer_product(state.rho, 1.0, q.amplitudes[init.state]);
    }
    return state;
}

MeasurePrepareOutcome measure_prepare_step(const QuantumCausalStates& q, int current_state,
                                           Rng& rng) {
    if (current_state < 0 || current_state >= q.n_states)
        throw validation_error("measure_prepare_step: state index out of range");
    const auto& amp = q.amplitudes[current_state];
    const double u = rng.uniform01();
    double acc = 0.0;
    int last = -1;
    for (int x = 0; x < q.dim(); ++x) {
        const double p = amp[x] * amp[x];
        if (p <= 0.0) continue;
        last = x;
        acc += p;
        if (u < acc) break;
    }
    return {last / q.n_states, last % q.n_states};
}

std::vector<double> constant_entropy_step(ProtocolState& state, const KrausSet& kraus) {
    const QuantumCausalStates& q = kraus.states;
    const int n = q.n_states;
    const int a = q.n_symbols;
    const int m_dim = q.dim();       // machine subsystem
    const int big_dim = a * m_dim;   // emitted subsystem x machine subsystem
    if (state.rho.rows != m_dim || state.rho.cols != m_dim)
        throw validation_error("constant_entropy_step: state dimension mismatch");
    if (big_dim > kMaxEnlargedDim)
        throw budget_error("constant_entropy_step: enlarged system too large for dense "
                           "simulation");

    const double trace_in = trace(state.rho);

    // Channel application. The Kraus operators act on the successor index
    // of the machine subsystem, so with basis |r1>|x2> (x2 a product index
    // over the new emission and successor factors):
    //   sigma[(r1, x), (r1', x')] = sum_m rho[(r1, m), (r1', m)] S_m[x] S_m[x']
    Matrix sigma(big_dim, big_dim);
    for (int m = 0; m < n; ++m) {
        const auto& s = q.amplitudes[m];
        for (int r1 = 0; r1 < a; ++r1)
            for (int r1p = 0; r1p < a; ++r1p) {
                const double w = state.rho(r1 * n + m, r1p * n + m);
                if (w == 0.0) continue;
                for (int x = 0; x < m_dim; ++x) {
                    if (s[x] == 0.0) continue;
                    const double wx = w * s[x];
                    double* row = &sigma(r1 * m_dim + x, r1p * m_dim);
                    for (int xp = 0; xp < m_dim; ++xp) row[xp] += wx * s[xp];
                }
            }
    }

    // measurement marginal of the emitted subsystem
    std::vector<double> marginal(a, 0.0);
    for (int r1 = 0; r1 < a; ++r1)
        for (int x = 0; x < m_dim; ++x) marginal[r1] += sigma(r1 * m_dim + x, r1 * m_dim + x);

    // trace out the emitted subsystem; the remainder is the next machine state
    Matrix next(m_dim, m_dim);
    for (int r1 = 0; r1 < a; ++r1)
        for (int x = 0; x < m_dim; ++x)
            for (int xp = 0; xp < m_dim; ++xp)
                next(x, xp) += sigma(r1 * m_dim + x, r1 * m_dim + xp);

    const double trace_out = trace(next);
    if (std::abs(trace_out - trace_in) > 1e-8 || std::abs(trace_out - 1.0) > 1e-8)
        throw numerical_error("constant_entropy_step: trace deviation above 1e-8");

    const auto eigenvalues = jacobi_eigenvalues(next);
    double entropy = shannon_entropy_bits(eigenvalues, 1e-10);
    if (entropy < 0.0 && entropy > -1e-12) entropy = 0.0;

    state.rho = std::move(next);
    const int step = static_cast<int>(state.entropy_log.size()) + 1;
    state.entropy_log.emplace_back(step, entropy);
    return marginal;
}

Matrix overlap_monotonicity_check(const QuantumCausalStates& q) {
    const int n = q.n_states;
    const int a = q.n_symbols;
    const GramMatrix gram = gram_matrix(q);

    // <S'_j|S'_k> = sum_r sum_{m,m'} sqrt(T[j][m][r] T[k][m'][r]) <S_m|S_m'>
    Matrix diff(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            double primed = 0.0;
            for (int r = 0; r < a; ++r)
                for (int m = 0; m < n; ++m) {
                    const double aj = q.amplitudes[j][static_cast<std::size_t>(r) * n + m];
                    if (aj == 0.0) continue;
                    for (int mp = 0; mp < n; ++mp) {
                        const double ak = q.amplitudes[k][static_cast<std::size_t>(r) * n + mp];
                        if (ak == 0.0) continue;
                        primed += aj * ak * gram.g(m, mp);
                    }
                }
            diff(j, k) = diff(k, j) = primed - gram.g(j, k);
        }
    return diff;
}

ProtocolState run_protocol(const EpsilonMachine& m, int steps, ProtocolMode mode,
                           std::uint64_t seed, ProtocolInit init) {
    if (steps < 1) throw validation_error("run_protocol: steps must be >= 1");
    const auto q = build_quantum_states(m);
    const auto stat = stationary_distribution(m);

    if (mode == ProtocolMode::measure_prepare) {
        ProtocolState state;
        Rng rng(seed);
        int cur = init.is_stationary ? sample_index(stat.p, rng) : init.state;
        if (cur < 0 || cur >= m.n_states())
            throw validation_error("run_protocol: initial state index out of range");
        state.emitted.seed = seed;
        state.emitted.initial_state = cur;
        for (int step = 1; step <= steps; ++step) {
            const auto outcome = measure_prepare_step(q, cur, rng);
            state.emitted.symbols.push_back(outcome.symbol);
            cur = outcome.next_state;
            // the machine subsystem is re-prepared in a pure state each round
            state.entropy_log.emplace_back(step, 0.0);
        }
        state.rho = Matrix(q.dim(), q.dim());
        add_outer_product(state.rho, 1.0, q.amplitudes[cur]);
        return state;
    }

    ProtocolState state = initial_protocol_state(q, stat, init);
    state.emitted.seed = seed;
    state.emitted.initial_state = init.is_stationary ? 0 : init.state;
    const KrausSet kraus = make_kraus_set(q);
    for (int step = 0; step < steps; ++step) constant_entropy_step(state, kraus);
    return state;
}

}  // namespace qem
