#include "qem/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace qem {

namespace {

constexpr std::uint64_t kHistoryFutureBudget = std::uint64_t{1} << 24;

// sparse distribution over future codes, sorted by code
using SparseDist = std::vector<std::pair<std::uint32_t, double>>;

double l1_sparse(const SparseDist& a, const SparseDist& b) {
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
            d += a[i++].second;
        } else if (i >= a.size() || b[j].first < a[i].first) {
            d += b[j++].second;
        } else {
            d += std::abs(a[i].second - b[j].second);
            ++i;
            ++j;
        }
    }
    return d;
}

// strongly connected components by iterative Tarjan; returns component id
// per node
std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj, int& n_components) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), lowlink(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;
    n_components = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& frame = call.back();
            const int v = frame.v;
            if (frame.child < adj[v].size()) {
                const int w = adj[v][frame.child++];
                if (index[w] < 0) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                if (lowlink[v] == index[v]) {
                    for (;;) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = n_components;
                        if (w == v) break;
                    }
                    ++n_components;
                }
                call.pop_back();
                if (!call.empty())
                    lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[v]);
            }
        }
    }
    return comp;
}

}  // namespace

InferenceResult infer_machine(const std::vector<int>& symbols, const Alphabet& alphabet,
                              const InferenceConfig& config) {
    const int a = alphabet.size();
    const int hist_len = config.history_length;
    const int fut_len = config.future_length;
    if (a < 1) throw validation_error("infer_machine: alphabet is empty");
    if (hist_len < 1 || fut_len < 1)
        throw validation_error("infer_machine: history and future lengths must be >= 1");
    if (!(config.merge_tolerance > 0.0 && config.merge_tolerance < 1.0))
        throw validation_error("infer_machine: merge tolerance must be in (0, 1)");
    if (config.min_count < 1) throw validation_error("infer_machine: min_count must be >= 1");

    std::uint64_t combos = 1;
    for (int i = 0; i < hist_len + fut_len; ++i) {
        combos *= static_cast<std::uint64_t>(a);
        if (combos > kHistoryFutureBudget)
            throw validation_error("infer_machine: |alphabet|^(L+F) exceeds the budget");
    }

    const std::size_t n = symbols.size();
    if (n == 0) throw validation_error("infer_machine: empty sequence");
    if (n < static_cast<std::size_t>(hist_len + fut_len))
        throw validation_error("infer_machine: sequence shorter than L + F");
    for (int s : symbols)
        if (s < 0 || s >= a) throw validation_error("infer_machine: symbol index out of range");

    InferenceDiagnostics diag;
    if (static_cast<double>(n) <
        std::pow(static_cast<double>(a), hist_len + fut_len) *
            static_cast<double>(config.min_count)) {
        std::ostringstream os;
        os << "sequence length " << n << " is small for |alphabet|^(L+F) * min_count = "
           << std::pow(static_cast<double>(a), hist_len + fut_len) *
                  static_cast<double>(config.min_count)
           << "; estimates may be unstable";
        diag.warnings.push_back(os.str());
    }

    // counting pass; codes are big-endian so numeric order matches
    // lexicographic word order
    std::uint64_t pow_l = 1, pow_f = 1;
    for (int i = 0; i < hist_len; ++i) pow_l *= a;
    for (int i = 0; i < fut_len; ++i) pow_f *= a;

    auto code_at = [&](std::size_t begin, int len) {
        std::uint32_t c = 0;
        for (int i = 0; i < len; ++i)
            c = c * static_cast<std::uint32_t>(a) + static_cast<std::uint32_t>(symbols[begin + i]);
        return c;
    };

    std::unordered_map<std::uint32_t, long long> hist_count;
    std::unordered_map<std::uint64_t, long long> future_count;  // hist * pow_f + future
    std::unordered_map<std::uint64_t, long long> trans_count;   // (hist * a + sym) * pow_l + next
    for (std::size_t i = hist_len; i + fut_len <= n; ++i) {
        const std::uint32_t h = code_at(i - hist_len, hist_len);
        const std::uint32_t f = code_at(i, fut_len);
        ++hist_count[h];
        ++future_count[static_cast<std::uint64_t>(h) * pow_f + f];
    }
    for (std::size_t i = hist_len; i + 1 <= n; ++i) {
        const std::uint32_t h = code_at(i - hist_len, hist_len);
        const std::uint32_t h2 = code_at(i - hist_len + 1, hist_len);
        const std::uint64_t key =
            (static_cast<std::uint64_t>(h) * a + static_cast<std::uint64_t>(symbols[i])) * pow_l +
            h2;
        ++trans_count[key];
    }

    diag.histories_seen = static_cast<long long>(hist_count.size());

    std::vector<std::uint32_t> kept;
    for (const auto& [h, c] : hist_count)
        if (c >= config.min_count) kept.push_back(h);
    std::sort(kept.begin(), kept.end());
    diag.histories_kept = static_cast<long long>(kept.size());
    if (kept.empty())
        throw validation_error("infer_machine: no history reaches min_count occurrences");

    // conditional future distribution per kept history
    std::unordered_map<std::uint32_t, SparseDist> future_dist;
    for (const auto& [key, c] : future_count) {
        const std::uint32_t h = static_cast<std::uint32_t>(key / pow_f);
        auto it = hist_count.find(h);
        if (it == hist_count.end() || it->second < config.min_count) continue;
        future_dist[h].emplace_back(static_cast<std::uint32_t>(key % pow_f),
                                    static_cast<double>(c) / static_cast<double>(it->second));
    }
    for (auto& [h, dist] : future_dist)
        std::sort(dist.begin(), dist.end());

    // greedy clustering in lexicographic history order; the representative
    // of a cluster is its founding history's distribution
    std::vector<SparseDist> representatives;
    std::unordered_map<std::uint32_t, int> cluster_of;
    std::vector<long long> occupancy;
    for (const std::uint32_t h : kept) {
        const SparseDist& dist = future_dist[h];
        int assigned = -1;
        for (std::size_t c = 0; c < representatives.size(); ++c) {
            if (l1_sparse(dist, representatives[c]) <= config.merge_tolerance) {
                assigned = static_cast<int>(c);
                break;
            }
        }
        if (assigned < 0) {
            assigned = static_cast<int>(representatives.size());
            representatives.push_back(dist);
            occupancy.push_back(0);
        }
        cluster_of[h] = assigned;
        occupancy[assigned] += hist_count[h];
    }
    const int n_clusters = static_cast<int>(representatives.size());

    // empirical transition counts between clusters
    std::map<std::tuple<int, int, int>, long long> cluster_trans;  // (c, sym, c')
    std::vector<long long> cluster_total(n_clusters, 0);
    for (const auto& [key, c] : trans_count) {
        const std::uint32_t h2 = static_cast<std::uint32_t>(key % pow_l);
        const std::uint64_t rest = key / pow_l;
        const int sym = static_cast<int>(rest % a);
        const std::uint32_t h = static_cast<std::uint32_t>(rest / a);
        const auto it = cluster_of.find(h);
        const auto it2 = cluster_of.find(h2);
        if (it == cluster_of.end() || it2 == cluster_of.end()) continue;
        cluster_trans[{it->second, sym, it2->second}] += c;
        cluster_total[it->second] += c;
    }

    // unifilarity repair: a (cluster, symbol) pair with several empirical
    // successors gets all of its mass on the majority successor
    std::map<std::pair<int, int>, std::vector<std::pair<int, long long>>> by_pair;
    for (const auto& [key, c] : cluster_trans)
        by_pair[{std::get<0>(key), std::get<1>(key)}].emplace_back(std::get<2>(key), c);

    std::map<std::tuple<int, int, int>, long long> repaired;
    for (const auto& [pair, succs] : by_pair) {
        if (succs.size() == 1) {
            repaired[{pair.first, pair.second, succs[0].first}] = succs[0].second;
            continue;
        }
        long long total = 0, best_count = -1;
        int best = -1;
        for (const auto& [target, c] : succs) {
            total += c;
            if (c > best_count || (c == best_count && target < best)) {
                best_count = c;
                best = target;
            }
        }
        repaired[{pair.first, pair.second, best}] = total;
        std::ostringstream os;
        os << "state " << pair.first << ", symbol '" << alphabet.symbols[pair.second] << "': "
           << succs.size() << " empirical successors merged into state " << best;
        diag.repairs.push_back(os.str());
    }

    // keep the heaviest strongly connected component so the result is ergodic
    std::vector<std::vector<int>> adj(n_clusters);
    for (const auto& [key, c] : repaired) {
        (void)c;
        adj[std::get<0>(key)].push_back(std::get<2>(key));
    }
    int n_components = 0;
    const std::vector<int> comp = scc_ids(adj, n_components);
    std::vector<long long> comp_weight(n_components, 0);
    std::vector<bool> comp_closed(n_components, true);  // has internal outgoing edges per node
    for (int c = 0; c < n_clusters; ++c) comp_weight[comp[c]] += occupancy[c];
    for (int c = 0; c < n_clusters; ++c) {
        bool internal = false;
        for (int target : adj[c])
            if (comp[target] == comp[c]) internal = true;
        if (!internal) comp_closed[comp[c]] = false;
    }
    int best_comp = -1;
    for (int i = 0; i < n_components; ++i) {
        if (!comp_closed[i]) continue;
        if (best_comp < 0 || comp_weight[i] > comp_weight[best_comp]) best_comp = i;
    }
    if (best_comp < 0)
        throw validation_error("infer_machine: no recurrent component in the estimated machine");

    std::vector<int> renumber(n_clusters, -1);
    int n_final = 0;
    for (int c = 0; c < n_clusters; ++c) {
        if (comp[c] == best_comp) {
            renumber[c] = n_final++;
        } else {
            std::ostringstream os;
            os << "state " << c << " (occupancy " << occupancy[c]
               << ") outside the recurrent component";
            diag.dropped.push_back(os.str());
        }
    }

    std::vector<std::string> names;
    for (int i = 0; i < n_final; ++i) names.push_back("S" + std::to_string(i));
    EpsilonMachine machine(alphabet, std::move(names));

    std::vector<double> row_mass(n_final, 0.0);
    for (const auto& [key, c] : repaired) {
        const int from = renumber[std::get<0>(key)];
        const int to = renumber[std::get<2>(key)];
        if (from < 0 || to < 0) continue;
        row_mass[from] += static_cast<double>(c);
    }
    for (const auto& [key, c] : repaired) {
        const int from = renumber[std::get<0>(key)];
        const int to = renumber[std::get<2>(key)];
        if (from < 0 || to < 0) continue;
        machine.set_t(from, to, std::get<1>(key), static_cast<double>(c) / row_mass[from]);
    }

    require_valid(machine);

    diag.cluster_count = n_final;
    diag.cluster_occupancy.assign(n_final, 0);
    for (int c = 0; c < n_clusters; ++c)
        if (renumber[c] >= 0) diag.cluster_occupancy[renumber[c]] = occupancy[c];

    return {std::move(machine), std::move(diag)};
}

}  // namespace qem
