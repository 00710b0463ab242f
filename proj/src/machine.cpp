#include "qem/machine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "qem/numerics.hpp"
#include "qem/rng.hpp"

namespace qem {

int Alphabet::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] == label) return static_cast<int>(i);
    return -1;
}

EpsilonMachine::EpsilonMachine(Alphabet a, std::vector<std::string> names)
    : alphabet(std::move(a)), state_names(std::move(names)) {
    transitions.assign(static_cast<std::size_t>(n_states()) * n_states() * n_symbols(), 0.0);
}

double EpsilonMachine::emission_probability(int j, int r) const {
    double s = 0.0;
    for (int k = 0; k < n_states(); ++k) s += t(j, k, r);
    return s;
}

int EpsilonMachine::successor(int j, int r) const {
    for (int k = 0; k < n_states(); ++k)
        if (t(j, k, r) > kStructuralFloor) return k;
    return -1;
}

int EpsilonMachine::state_index(const std::string& name) const {
    for (std::size_t i = 0; i < state_names.size(); ++i)
        if (state_names[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

// reachability over positive-probability marginal transitions
std::vector<bool> reachable_from(const EpsilonMachine& m, int start, bool reversed) {
    const int n = m.n_states();
    std::vector<bool> seen(n, false);
    std::deque<int> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v = 0; v < n; ++v) {
            if (seen[v]) continue;
            double w = 0.0;
            for (int r = 0; r < m.n_symbols(); ++r) w += reversed ? m.t(v, u, r) : m.t(u, v, r);
            if (w > kStructuralFloor) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

}  // namespace

std::vector<Violation> validate(const EpsilonMachine& m) {
    std::vector<Violation> out;
    const int n = m.n_states();
    const int a = m.n_symbols();

    if (a < 1) out.push_back({"alphabet", "alphabet is empty"});
    {
        std::set<std::string> seen;
        for (const auto& s : m.alphabet.symbols)
            if (!seen.insert(s).second)
                out.push_back({"alphabet", "duplicate symbol label '" + s + "'"});
    }
    if (n < 1) out.push_back({"states", "machine has no states"});
    {
        std::set<std::string> seen;
        for (const auto& s : m.state_names)
            if (!seen.insert(s).second)
                out.push_back({"states", "duplicate state name '" + s + "'"});
    }
    if (m.transitions.size() != static_cast<std::size_t>(n) * n * a) {
        out.push_back({"shape", "transition tensor size does not match states and alphabet"});
        return out;  // indexing below would be unsafe
    }
    if (n < 1 || a < 1) return out;

    for (int j = 0; j < n; ++j) {
        double row = 0.0;
        for (int k = 0; k < n; ++k) {
            for (int r = 0; r < a; ++r) {
                const double v = m.t(j, k, r);
                if (v < 0.0 || v > 1.0) {
                    std::ostringstream os;
                    os << "T[" << j << "][" << k << "][" << r << "] = " << v;
                    out.push_back({"range", os.str()});
                }
                row += v;
            }
        }
        if (std::abs(row - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "state " << j << ": row sum = " << row;
            out.push_back({"normalization", os.str()});
        }
    }

    for (int j = 0; j < n; ++j) {
        for (int r = 0; r < a; ++r) {
            int positive = 0;
            for (int k = 0; k < n; ++k)
                if (m.t(j, k, r) > kStructuralFloor) ++positive;
            if (positive > 1) {
                std::ostringstream os;
                os << "state " << j << ", symbol " << r << ": " << positive
                   << " positive successors";
                out.push_back({"unifilarity", os.str()});
            }
        }
    }

    // ergodicity: every state reaches and is reached by state 0
    const auto fwd = reachable_from(m, 0, false);
    const auto bwd = reachable_from(m, 0, true);
    for (int j = 0; j < n; ++j) {
        if (!fwd[j]) {
            std::ostringstream os;
            os << "state " << j << " unreachable from state 0";
            out.push_back({"ergodicity", os.str()});
        }
        if (!bwd[j]) {
            std::ostringstream os;
            os << "state 0 unreachable from state " << j;
            out.push_back({"ergodicity", os.str()});
        }
    }
    return out;
}

void require_valid(const EpsilonMachine& m) {
    auto violations = validate(m);
    if (violations.empty()) return;
    std::ostringstream os;
    os << "machine violates " << violations.size() << " invariant(s):";
    for (const auto& v : violations) os << " [" << v.invariant << "] " << v.detail << ";";
    throw validation_error(os.str(), std::move(violations));
}

StationaryDistribution stationary_distribution(const EpsilonMachine& m) {
    const int n = m.n_states();
    std::vector<double> marginal(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double w = 0.0;
            for (int r = 0; r < m.n_symbols(); ++r) w += m.t(j, k, r);
            marginal[static_cast<std::size_t>(j) * n + k] = w;
        }

    std::vector<double> p(n, 1.0 / n), next(n);
    bool converged = false;
    for (int iter = 0; iter < 1'000'000; ++iter) {
        // damping keeps periodic chains from oscillating
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += p[j] * marginal[static_cast<std::size_t>(j) * n + k];
            next[k] = 0.5 * p[k] + 0.5 * acc;
        }
        double delta = 0.0;
        for (int k = 0; k < n; ++k) delta += std::abs(next[k] - p[k]);
        p.swap(next);
        if (delta < 1e-13) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw numerical_error(
            "stationary_distribution: power iteration did not converge; "
            "machine may be non-ergodic or ill-conditioned");

    double total = 0.0;
    for (double v : p) total += v;
    for (double& v : p) v /= total;

    double residual = 0.0;
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += p[j] * marginal[static_cast<std::size_t>(j) * n + k];
        residual += std::abs(acc - p[k]);
    }
    if (residual > 1e-10)
        throw numerical_error("stationary_distribution: fixed-point residual above 1e-10");
    return {std::move(p)};
}

double statistical_complexity(const EpsilonMachine&, const StationaryDistribution& stat) {
    return shannon_entropy_bits(stat.p, 0.0);
}

std::vector<double> next_symbol_distribution(const EpsilonMachine& m, int state) {
    if (state < 0 || state >= m.n_states())
        throw validation_error("next_symbol_distribution: state index out of range");
    std::vector<double> out(m.n_symbols(), 0.0);
    for (int r = 0; r < m.n_symbols(); ++r) out[r] = m.emission_probability(state, r);
    return out;
}

SymbolSequence simulate(const EpsilonMachine& m, int initial_state, std::size_t length,
                        std::uint64_t seed) {
    const int n = m.n_states();
    const int a = m.n_symbols();
    if (initial_state < 0 || initial_state >= n)
        throw validation_error("simulate: initial state index out of range");

    std::vector<std::vector<double>> emission(n, std::vector<double>(a, 0.0));
    std::vector<int> succ(static_cast<std::size_t>(n) * a, -1);
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < a; ++r) {
            emission[j][r] = m.emission_probability(j, r);
            succ[static_cast<std::size_t>(j) * a + r] = m.successor(j, r);
        }

    SymbolSequence out;
    out.seed = seed;
    out.initial_state = initial_state;
    out.symbols.reserve(length);

    Rng rng(seed);
    int cur = initial_state;
    for (std::size_t i = 0; i < length; ++i) {
        const int r = sample_index(emission[cur], rng);
        out.symbols.push_back(r);
        cur = succ[static_cast<std::size_t>(cur) * a + r];
    }
    return out;
}

bool is_minimal_presentation(const EpsilonMachine& m, double prob_tol) {
    const int n = m.n_states();
    const int a = m.n_symbols();
    if (n <= 1) return true;

    // probabilistic bisimulation refinement: split until states in the same
    // block have equal emission rows and block-equal successors
    std::vector<int> block(n, 0);
    for (;;) {
        std::vector<int> next(n, -1);
        int n_blocks = 0;
        for (int j = 0; j < n; ++j) {
            for (int j2 = 0; j2 < j; ++j2) {
                if (next[j2] < 0 || block[j2] != block[j]) continue;
                bool same = true;
                for (int r = 0; r < a && same; ++r) {
                    if (std::abs(m.emission_probability(j, r) - m.emission_probability(j2, r)) >
                        prob_tol) {
                        same = false;
                        break;
                    }
                    const int s1 = m.successor(j, r);
                    const int s2 = m.successor(j2, r);
                    if ((s1 < 0) != (s2 < 0)) same = false;
                    else if (s1 >= 0 && block[s1] != block[s2]) same = false;
                }
                if (same) {
                    next[j] = next[j2];
                    break;
                }
            }
            if (next[j] < 0) next[j] = n_blocks++;
        }
        if (next == block) break;
        block.swap(next);
    }
    return *std::max_element(block.begin(), block.end()) == n - 1;
}

}  // namespace qem
