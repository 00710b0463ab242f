#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qem/machine.hpp"
#include "qem/machine_io.hpp"
#include "qem/processes.hpp"
#include "qem/random_machines.hpp"

#include "oracle_helpers.hpp"

using namespace qem;

namespace {

// asymmetric two-state chain: flips 0->1 with probability 0.2 and 1->0
// with probability 0.4; stationary distribution is (2/3, 1/3)
const char* kBiasedMachineJson = R"({
  "alphabet": ["0", "1"],
  "states": ["S0", "S1"],
  "edges": [
    {"from": "S0", "symbol": "0", "to": "S0", "p": 0.8},
    {"from": "S0", "symbol": "1", "to": "S1", "p": 0.2},
    {"from": "S1", "symbol": "1", "to": "S1", "p": 0.6},
    {"from": "S1", "symbol": "0", "to": "S0", "p": 0.4}
  ]
})";

bool has_violation(const std::vector<Violation>& vs, const std::string& invariant) {
    for (const auto& v : vs)
        if (v.invariant == invariant) return true;
    return false;
}

}  // namespace

TEST_CASE("catalog machines validate cleanly") {
    CHECK(validate(perturbed_coin(0.25)).empty());
    CHECK(validate(coin_lattice(2, 0.3)).empty());
    CHECK(validate(alternating_switches()).empty());
    CHECK(validate(iid_coin(0.5)).empty());
}

TEST_CASE("validate reports broken invariants with indices") {
    auto m = perturbed_coin(0.25);
    m.set_t(0, 0, 0, 0.65);  // row sum 0.9
    auto vs = validate(m);
    REQUIRE(has_violation(vs, "normalization"));
    bool mentions_state0 = false;
    for (const auto& v : vs)
        if (v.invariant == "normalization" && v.detail.find("state 0") != std::string::npos)
            mentions_state0 = true;
    CHECK(mentions_state0);

    auto u = perturbed_coin(0.25);
    // state 0 now has two positive successors for symbol 0
    u.set_t(0, 0, 0, 0.375);
    u.set_t(0, 1, 0, 0.375);
    CHECK(has_violation(validate(u), "unifilarity"));

    // two disconnected self-loop states
    EpsilonMachine split({{"0", "1"}}, {"A", "B"});
    split.set_t(0, 0, 0, 0.5);
    split.set_t(0, 0, 1, 0.5);
    split.set_t(1, 1, 0, 0.5);
    split.set_t(1, 1, 1, 0.5);
    CHECK(has_violation(validate(split), "ergodicity"));

    CHECK_THROWS_AS(require_valid(split), validation_error);
}

TEST_CASE("stationary distribution") {
    auto stat = stationary_distribution(perturbed_coin(0.25));
    CHECK(std::abs(stat.p[0] - 0.5) < 1e-12);
    CHECK(std::abs(stat.p[1] - 0.5) < 1e-12);

    // deterministic alternation is periodic; damping still converges
    stat = stationary_distribution(alternating_switches());
    CHECK(std::abs(stat.p[0] - 0.5) < 1e-12);
    CHECK(std::abs(stat.p[1] - 0.5) < 1e-12);

    const auto biased = machine_from_json(kBiasedMachineJson);
    stat = stationary_distribution(biased);
    CHECK(std::abs(stat.p[0] - 2.0 / 3.0) < 1e-10);
    CHECK(std::abs(stat.p[1] - 1.0 / 3.0) < 1e-10);
}

TEST_CASE("stationary fixed point residual on random machines") {
    Rng rng(99);
    RandomMachineOptions opts;
    for (int i = 0; i < 40; ++i) {
        const auto m = random_unifilar_machine(rng, opts);
        const auto stat = stationary_distribution(m);
        double sum = 0.0;
        for (double v : stat.p) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
        // one application of the marginal transition matrix
        const int n = m.n_states();
        double residual = 0.0;
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                for (int r = 0; r < m.n_symbols(); ++r) acc += stat.p[j] * m.t(j, k, r);
            residual += std::abs(acc - stat.p[k]);
        }
        CHECK(residual < 1e-10);
    }
}

TEST_CASE("statistical complexity") {
    auto coin = perturbed_coin(0.3);
    CHECK(std::abs(statistical_complexity(coin, stationary_distribution(coin)) - 1.0) < 1e-12);

    auto iid = iid_coin(0.5);
    CHECK(statistical_complexity(iid, stationary_distribution(iid)) == 0.0);

    auto lattice = coin_lattice(3, 0.3);
    CHECK(std::abs(statistical_complexity(lattice, stationary_distribution(lattice)) - 3.0) <
          1e-12);
}

TEST_CASE("next symbol distribution") {
    const auto coin = perturbed_coin(0.25);
    auto d = next_symbol_distribution(coin, 0);
    CHECK(d[0] == 0.75);
    CHECK(d[1] == 0.25);

    d = next_symbol_distribution(alternating_switches(), 0);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 1.0);

    d = next_symbol_distribution(iid_coin(0.5), 0);
    CHECK(d[0] == 0.5);
    CHECK(d[1] == 0.5);

    CHECK_THROWS_AS(next_symbol_distribution(coin, 2), validation_error);
}

TEST_CASE("next symbol distributions sum to one on random machines") {
    Rng rng(7);
    for (int i = 0; i < 40; ++i) {
        const auto m = random_unifilar_machine(rng);
        for (int j = 0; j < m.n_states(); ++j) {
            double sum = 0.0;
            for (double v : next_symbol_distribution(m, j)) sum += v;
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("simulate: deterministic machine and edge cases") {
    const auto alt = alternating_switches();
    const auto seq = simulate(alt, 0, 4, 123);
    CHECK(seq.symbols == std::vector<int>{1, 0, 1, 0});
    CHECK(seq.seed == 123);
    CHECK(seq.initial_state == 0);

    CHECK(simulate(alt, 0, 0, 1).symbols.empty());
    CHECK_THROWS_AS(simulate(alt, 5, 1, 1), validation_error);

    // determinism
    const auto coin = perturbed_coin(0.25);
    CHECK(simulate(coin, 0, 1000, 77).symbols == simulate(coin, 0, 1000, 77).symbols);
}

TEST_CASE("simulate: empirical flip rate matches an independent oracle") {
    const double p = 0.1;
    const std::size_t n = 1'000'000;
    const auto seq = simulate(perturbed_coin(p), 0, n, 4242);

    auto flip_rate = [](const std::vector<int>& s, int first) {
        long long flips = 0;
        int prev = first;
        for (int x : s) {
            if (x != prev) ++flips;
            prev = x;
        }
        return static_cast<double>(flips) / static_cast<double>(s.size());
    };
    // the machine state equals the last emitted symbol, so symbol changes
    // are exactly coin flips
    const double rate = flip_rate(seq.symbols, 0);
    CHECK(std::abs(rate - p) < 0.001);

    // direct physical simulation of the same process
    const auto oracle = testing::naive_perturbed_coin_run(p, 0, n, 999);
    const double oracle_rate = flip_rate(oracle, 0);
    const double three_sigma = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    CHECK(std::abs(rate - oracle_rate) < 2.0 * three_sigma);
    CHECK(std::abs(oracle_rate - p) < three_sigma);
}

TEST_CASE("simulate: symbol frequencies match the stationary process distribution") {
    const auto m = coin_lattice(2, 0.3);
    const auto stat = stationary_distribution(m);
    const std::size_t n = 1'000'000;
    const auto seq = simulate(m, 0, n, 31);

    std::vector<double> expected(m.n_symbols(), 0.0);
    for (int j = 0; j < m.n_states(); ++j)
        for (int r = 0; r < m.n_symbols(); ++r)
            expected[r] += stat.p[j] * m.emission_probability(j, r);

    std::vector<long long> counts(m.n_symbols(), 0);
    for (int s : seq.symbols) ++counts[s];
    for (int r = 0; r < m.n_symbols(); ++r) {
        const double freq = static_cast<double>(counts[r]) / static_cast<double>(n);
        const double sigma = std::sqrt(expected[r] * (1.0 - expected[r]) / static_cast<double>(n));
        CHECK(std::abs(freq - expected[r]) < 3.0 * sigma);
    }
}

TEST_CASE("machine JSON round trip") {
    const auto m = perturbed_coin(0.25);
    const std::string text = machine_to_json(m);
    const auto back = machine_from_json(text);
    CHECK(back.state_names == m.state_names);
    CHECK(back.alphabet.symbols == m.alphabet.symbols);
    CHECK(back.transitions == m.transitions);  // doubles survive exactly
    CHECK(machine_to_json(back) == text);      // byte-identical re-save
}

TEST_CASE("machine JSON rejects malformed input") {
    CHECK_THROWS_AS(machine_from_json("not json"), io_error);
    CHECK_THROWS_AS(machine_from_json("{}"), validation_error);
    CHECK_THROWS_AS(
        machine_from_json(R"({"alphabet":["0"],"states":["S0"],
            "edges":[{"from":"S0","symbol":"x","to":"S0","p":1.0}]})"),
        validation_error);
    // duplicate edge
    CHECK_THROWS_AS(
        machine_from_json(R"({"alphabet":["0"],"states":["S0"],
            "edges":[{"from":"S0","symbol":"0","to":"S0","p":0.5},
                     {"from":"S0","symbol":"0","to":"S0","p":0.5}]})"),
        validation_error);
    // non-unifilar
    CHECK_THROWS_AS(
        machine_from_json(R"({"alphabet":["0","1"],"states":["S0","S1"],
            "edges":[{"from":"S0","symbol":"0","to":"S0","p":0.5},
                     {"from":"S0","symbol":"0","to":"S1","p":0.5},
                     {"from":"S1","symbol":"1","to":"S0","p":1.0}]})"),
        validation_error);
}

TEST_CASE("minimality detection") {
    CHECK(is_minimal_presentation(perturbed_coin(0.25)));
    CHECK(is_minimal_presentation(alternating_switches()));
    CHECK(is_minimal_presentation(iid_coin(0.3)));

    // deterministic two-cycle emitting the same symbol on both edges: the
    // output is constant, so the two states are equivalent
    EpsilonMachine cycle({{"0", "1"}}, {"A", "B"});
    cycle.set_t(0, 1, 0, 1.0);
    cycle.set_t(1, 0, 0, 1.0);
    CHECK_FALSE(is_minimal_presentation(cycle));

    // states with identical rows
    EpsilonMachine twin({{"0", "1"}}, {"A", "B"});
    twin.set_t(0, 0, 0, 0.5);
    twin.set_t(0, 1, 1, 0.5);
    twin.set_t(1, 0, 0, 0.5);
    twin.set_t(1, 1, 1, 0.5);
    CHECK_FALSE(is_minimal_presentation(twin));
}
