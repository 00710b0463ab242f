#include "qem/info_measures.hpp"

#include <cmath>
#include <span>

#include "qem/numerics.hpp"
#include "qem/rng.hpp"

namespace qem {

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw validation_error("binary_entropy: p outside [0, 1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

namespace {

// true when n_symbols^t stays within the exact-enumeration word budget
bool within_word_budget(int n_symbols, int t) {
    std::uint64_t words = 1;
    for (int i = 0; i < t; ++i) {
        words *= static_cast<std::uint64_t>(n_symbols);
        if (words > kWordEnumerationBudget) return false;
    }
    return true;
}

// Exact computation of H(S_-1 | X_0^t) for one horizon t.
//
// Words are walked depth-first over the supported prefix tree. Because the
// machine is unifilar, each initial state contributes at most one surviving
// branch per prefix, so a node is the list of (weight, current state) pairs
// of the initial states still compatible with the prefix. Two exact
// shortcut rules keep the walk small:
//   - a single survivor pins the posterior; every extension contributes 0
//   - survivors sharing one current state evolve identically from here on,
//     so the posterior is frozen and the subtree contributes P(w) * H(w)
// Children are visited in symbol order, so the summation order is fixed
// and results are bit-identical run to run.
class WordEnumerator {
public:
    WordEnumerator(const EpsilonMachine& m, std::uint64_t node_budget)
        : n_(m.n_states()), a_(m.n_symbols()), node_budget_(node_budget) {
        emission_.resize(static_cast<std::size_t>(n_) * a_);
        successor_.resize(static_cast<std::size_t>(n_) * a_);
        for (int j = 0; j < n_; ++j)
            for (int r = 0; r < a_; ++r) {
                emission_[static_cast<std::size_t>(j) * a_ + r] = m.emission_probability(j, r);
                successor_[static_cast<std::size_t>(j) * a_ + r] = m.successor(j, r);
            }
    }

    double horizon_entropy(std::span<const double> stationary, int target_depth) {
        target_ = target_depth;
        sum_ = 0.0;
        nodes_ = 0;
        scratch_w_.assign(target_depth + 1, std::vector<double>(n_));
        scratch_c_.assign(target_depth + 1, std::vector<int>(n_));

        std::vector<double> w(stationary.begin(), stationary.end());
        std::vector<int> cur(n_);
        for (int j = 0; j < n_; ++j) cur[j] = j;
        descend(0, std::span<const double>(w), std::span<const int>(cur));
        return sum_;
    }

private:
    static double posterior_entropy(std::span<const double> w, double total) {
        double h = 0.0;
        for (double v : w) {
            const double x = v / total;
            if (x > 0.0) h -= x * std::log2(x);
        }
        return h;
    }

    void descend(int depth, std::span<const double> w, std::span<const int> cur) {
        for (int r = 0; r < a_; ++r) {
            auto& cw = scratch_w_[depth];
            auto& cc = scratch_c_[depth];
            int count = 0;
            double mass = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double pe = emission_[static_cast<std::size_t>(cur[i]) * a_ + r];
                if (pe <= 0.0) continue;  // zero-probability words are skipped
                const double child = w[i] * pe;
                cw[count] = child;
                cc[count] = successor_[static_cast<std::size_t>(cur[i]) * a_ + r];
                mass += child;
                ++count;
            }
            if (count == 0 || mass <= 0.0) continue;
            if (node_budget_ != 0 && ++nodes_ > node_budget_)
                throw budget_error("conditional entropy enumeration exceeded the node budget");

            const std::span<const double> cws(cw.data(), count);
            const std::span<const int> ccs(cc.data(), count);
            if (depth + 1 == target_) {
                sum_ += mass * posterior_entropy(cws, mass);
                continue;
            }
            if (count == 1) continue;  // posterior pinned, entropy 0 at the target
            bool merged = true;
            for (int i = 1; i < count; ++i)
                if (cc[i] != cc[0]) {
                    merged = false;
                    break;
                }
            if (merged) {
                // identical evolution from here on: posterior frozen
                sum_ += mass * posterior_entropy(cws, mass);
                continue;
            }
            descend(depth + 1, cws, ccs);
        }
    }

    int n_;
    int a_;
    std::uint64_t node_budget_;
    int target_ = 0;
    double sum_ = 0.0;
    std::uint64_t nodes_ = 0;
    std::vector<double> emission_;
    std::vector<int> successor_;
    std::vector<std::vector<double>> scratch_w_;
    std::vector<std::vector<int>> scratch_c_;
};

// Monte Carlo estimate of the same quantity: sample stationary words, take
// the exact posterior of each sampled word by forward filtering.
double monte_carlo_horizon_entropy(const EpsilonMachine& m, std::span<const double> stationary,
                                   int t, std::size_t samples, std::uint64_t seed) {
    const int n = m.n_states();
    const int a = m.n_symbols();
    std::vector<std::vector<double>> emission(n, std::vector<double>(a));
    std::vector<int> succ(static_cast<std::size_t>(n) * a);
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < a; ++r) {
            emission[j][r] = m.emission_probability(j, r);
            succ[static_cast<std::size_t>(j) * a + r] = m.successor(j, r);
        }

    Rng rng(seed);
    std::vector<int> word(t);
    std::vector<double> weight(n);
    std::vector<int> cur(n);
    double acc = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        int state = sample_index(stationary, rng);
        for (int i = 0; i < t; ++i) {
            const int r = sample_index(emission[state], rng);
            word[i] = r;
            state = succ[static_cast<std::size_t>(state) * a + r];
        }
        for (int j = 0; j < n; ++j) {
            weight[j] = stationary[j];
            cur[j] = j;
        }
        double total = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < t && weight[j] > 0.0; ++i) {
                weight[j] *= emission[cur[j]][word[i]];
                if (weight[j] <= 0.0) break;
                cur[j] = succ[static_cast<std::size_t>(cur[j]) * a + word[i]];
            }
            total += weight[j];
        }
        double h = 0.0;
        for (int j = 0; j < n; ++j) {
            const double x = weight[j] / total;
            if (x > 0.0) h -= x * std::log2(x);
        }
        acc += h;
    }
    return acc / static_cast<double>(samples);
}

}  // namespace

double conditional_initial_state_entropy(const EpsilonMachine& m,
                                         const StationaryDistribution& stat, int t) {
    if (t < 1) throw validation_error("conditional_initial_state_entropy: horizon must be >= 1");
    if (!within_word_budget(m.n_symbols(), t))
        throw budget_error("conditional_initial_state_entropy: |alphabet|^t exceeds the "
                           "enumeration budget; use the Monte Carlo fallback");
    WordEnumerator we(m, 0);
    return we.horizon_entropy(stat.p, t);
}

ExcessEntropyEstimate excess_entropy(const EpsilonMachine& m, const StationaryDistribution& stat,
                                     const ExcessEntropyOptions& opts) {
    if (opts.t_max < 1) throw validation_error("excess_entropy: t_max must be >= 1");
    const double c_mu = statistical_complexity(m, stat);

    ExcessEntropyEstimate est;
    WordEnumerator we(m, opts.node_budget);
    double prev = c_mu;  // H(S_-1 | nothing observed)
    for (int t = 1; t <= opts.t_max; ++t) {
        double h;
        if (within_word_budget(m.n_symbols(), t)) {
            h = we.horizon_entropy(stat.p, t);
        } else if (opts.allow_monte_carlo) {
            h = monte_carlo_horizon_entropy(m, stat.p, t, opts.monte_carlo_samples,
                                            opts.monte_carlo_seed + static_cast<std::uint64_t>(t));
            est.approximate = true;
        } else {
            throw budget_error("excess_entropy: enumeration budget exceeded before t_max and "
                               "the Monte Carlo fallback is disabled");
        }
        est.trace.emplace_back(t, h);
        if (std::abs(h - prev) < opts.tol) {
            est.converged = true;
            break;
        }
        prev = h;
    }
    est.horizon_used = est.trace.back().first;
    est.value = c_mu - est.trace.back().second;
    return est;
}

ExcessEntropyEstimate excess_entropy(const EpsilonMachine& m, const StationaryDistribution& stat,
                                     double tol, int t_max) {
    ExcessEntropyOptions opts;
    opts.tol = tol;
    opts.t_max = t_max;
    return excess_entropy(m, stat, opts);
}

}  // namespace qem
