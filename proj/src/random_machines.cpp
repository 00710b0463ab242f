#include "qem/random_machines.hpp"

#include <cmath>

#include "qem/info_measures.hpp"

namespace qem {

namespace {

// draw once; empty optional when the structure is unusable before weights
// are even assigned
bool draw_structure(Rng& rng, int n, int a, double absent_probability,
                    std::vector<int>& target) {
    target.assign(static_cast<std::size_t>(n) * a, -1);
    for (int j = 0; j < n; ++j) {
        bool any = false;
        for (int r = 0; r < a; ++r) {
            if (rng.uniform01() < absent_probability) continue;
            target[static_cast<std::size_t>(j) * a + r] = static_cast<int>(rng.below(n));
            any = true;
        }
        if (!any) return false;  // a state with no outgoing transition cannot normalize
    }
    return true;
}

}  // namespace

EpsilonMachine random_unifilar_machine(Rng& rng, const RandomMachineOptions& opts) {
    std::vector<int> target;
    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        const int n = opts.min_states +
                      static_cast<int>(rng.below(opts.max_states - opts.min_states + 1));
        const int a = opts.min_symbols +
                      static_cast<int>(rng.below(opts.max_symbols - opts.min_symbols + 1));
        if (!draw_structure(rng, n, a, opts.absent_probability, target)) continue;

        Alphabet alphabet;
        for (int r = 0; r < a; ++r) alphabet.symbols.push_back(std::to_string(r));
        std::vector<std::string> names;
        for (int j = 0; j < n; ++j) names.push_back("S" + std::to_string(j));
        EpsilonMachine m(std::move(alphabet), std::move(names));

        // Dirichlet(1,..,1) weights over the present pairs of each state
        bool degenerate = false;
        for (int j = 0; j < n && !degenerate; ++j) {
            std::vector<double> weight(a, 0.0);
            double total = 0.0;
            for (int r = 0; r < a; ++r) {
                if (target[static_cast<std::size_t>(j) * a + r] < 0) continue;
                weight[r] = -std::log(1.0 - rng.uniform01());
                total += weight[r];
            }
            if (total <= 0.0) {
                degenerate = true;
                break;
            }
            for (int r = 0; r < a; ++r) {
                const int k = target[static_cast<std::size_t>(j) * a + r];
                if (k >= 0) m.set_t(j, k, r, weight[r] / total);
            }
        }
        if (degenerate) continue;

        if (!validate(m).empty()) continue;  // mostly non-ergodic draws
        if (opts.require_minimal && !is_minimal_presentation(m)) continue;
        if (opts.require_converged_excess) {
            ExcessEntropyOptions e;
            e.tol = opts.excess_tol;
            e.t_max = opts.excess_t_max;
            e.allow_monte_carlo = false;
            e.node_budget = opts.excess_node_budget;
            try {
                const auto stat = stationary_distribution(m);
                if (!excess_entropy(m, stat, e).converged) continue;
            } catch (const budget_error&) {
                continue;
            }
        }
        return m;
    }
    throw numerical_error("random_unifilar_machine: attempt budget exhausted");
}

}  // namespace qem
