#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qem/compare.hpp"
#include "qem/processes.hpp"
#include "qem/quantum_sim.hpp"
#include "qem/random_machines.hpp"

#include "oracle_helpers.hpp"

using namespace qem;

namespace {

constexpr double kCq025 = 0.354578902665269884;

double machine_cq(const EpsilonMachine& m) {
    return quantum_complexity(build_quantum_states(m), stationary_distribution(m)).c_q;
}

}  // namespace

TEST_CASE("kraus operators are complete") {
    auto deviation = [](const EpsilonMachine& m) {
        return make_kraus_set(build_quantum_states(m)).completeness_deviation();
    };
    CHECK(deviation(perturbed_coin(0.25)) < 1e-12);
    CHECK(deviation(coin_lattice(3, 0.1)) < 1e-12);
    CHECK(deviation(alternating_switches()) < 1e-12);
    CHECK(deviation(iid_coin(0.5)) < 1e-12);

    Rng rng(21);
    for (int i = 0; i < 30; ++i) CHECK(deviation(random_unifilar_machine(rng)) < 1e-12);
}

TEST_CASE("kraus operator matrix maps |k> to |S_k>") {
    const auto q = build_quantum_states(perturbed_coin(0.25));
    const auto kraus = make_kraus_set(q);
    const auto b1 = kraus.operator_matrix(1);
    REQUIRE(b1.rows == 4);
    REQUIRE(b1.cols == 2);
    for (int x = 0; x < 4; ++x) {
        CHECK(b1(x, 0) == 0.0);
        CHECK(b1(x, 1) == q.amplitudes[1][x]);
    }
}

TEST_CASE("measure-prepare step on a deterministic machine") {
    const auto q = build_quantum_states(alternating_switches());
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto outcome = measure_prepare_step(q, 0, rng);
        CHECK(outcome.symbol == 1);
        CHECK(outcome.next_state == 1);
    }
}

TEST_CASE("measure-prepare outcome distribution equals the transition row") {
    const auto m = perturbed_coin(0.25);
    const auto q = build_quantum_states(m);
    Rng rng(99);
    const int n = 100000;
    // joint counts over (symbol, next state)
    long long counts[2][2] = {{0, 0}, {0, 0}};
    for (int i = 0; i < n; ++i) {
        const auto outcome = measure_prepare_step(q, 0, rng);
        ++counts[outcome.symbol][outcome.next_state];
    }
    for (int r = 0; r < 2; ++r)
        for (int k = 0; k < 2; ++k) {
            const double expected = m.t(0, k, r);
            const double freq = static_cast<double>(counts[r][k]) / n;
            const double sigma = std::sqrt(std::max(expected * (1 - expected), 1e-9) / n);
            CHECK(std::abs(freq - expected) < std::max(3.0 * sigma, 1e-6));
        }
    // P(symbol=0, next=S0) = 0.75 for the coin
    CHECK(std::abs(static_cast<double>(counts[0][0]) / n - 0.75) < 0.01);
}

TEST_CASE("constant-entropy step marginal equals the classical next-symbol law") {
    auto check_marginal = [](const EpsilonMachine& m) {
        const auto q = build_quantum_states(m);
        const auto kraus = make_kraus_set(q);
        const auto stat = stationary_distribution(m);
        for (int j = 0; j < m.n_states(); ++j) {
            auto state = initial_protocol_state(q, stat, ProtocolInit::pure_state(j));
            const auto marginal = constant_entropy_step(state, kraus);
            const auto classical = next_symbol_distribution(m, j);
            for (int r = 0; r < m.n_symbols(); ++r)
                CHECK(std::abs(marginal[r] - classical[r]) < 1e-12);
        }
    };
    check_marginal(perturbed_coin(0.25));
    check_marginal(coin_lattice(2, 0.3));
    check_marginal(alternating_switches());

    Rng rng(31);
    for (int i = 0; i < 10; ++i) check_marginal(random_unifilar_machine(rng));
}

TEST_CASE("stationary start keeps the entropy at C_q") {
    const auto m = perturbed_coin(0.25);
    const auto state = run_protocol(m, 10, ProtocolMode::constant_entropy, 0);
    REQUIRE(state.entropy_log.size() == 10);
    for (const auto& [step, h] : state.entropy_log) CHECK(std::abs(h - kCq025) < 1e-9);

    const auto lattice = coin_lattice(2, 0.3);
    const double cq = machine_cq(lattice);
    const auto lat_state = run_protocol(lattice, 10, ProtocolMode::constant_entropy, 0);
    for (const auto& [step, h] : lat_state.entropy_log) CHECK(std::abs(h - cq) < 1e-9);
}

TEST_CASE("orthogonal machine stays at the classical entropy exactly") {
    const auto state =
        run_protocol(alternating_switches(), 10, ProtocolMode::constant_entropy, 0);
    for (const auto& [step, h] : state.entropy_log) CHECK(std::abs(h - 1.0) < 1e-12);
}

TEST_CASE("pure-state start: first-step entropy from the 2x2 closed form") {
    const auto m = perturbed_coin(0.25);
    const auto q = build_quantum_states(m);
    const auto kraus = make_kraus_set(q);
    const auto stat = stationary_distribution(m);
    auto state = initial_protocol_state(q, stat, ProtocolInit::pure_state(0));
    constant_entropy_step(state, kraus);

    // after one round the machine holds sum_k P(k|0) |S_k><S_k|, whose
    // spectrum is that of [[q0, sqrt(q0 q1) g01], [., q1]]
    const auto gram = gram_matrix(q);
    const double q0 = m.emission_probability(0, 0);  // stays on face 0
    const double q1 = m.emission_probability(0, 1);
    const auto [hi, lo] =
        testing::sym2x2_eigenvalues(q0, std::sqrt(q0 * q1) * gram.g(0, 1), q1);
    const double expected = -(hi * std::log2(hi) + lo * std::log2(lo));
    CHECK(std::abs(state.entropy_log[0].second - expected) < 1e-12);
}

TEST_CASE("protocol steps preserve the trace") {
    Rng rng(77);
    auto check_traces = [](const EpsilonMachine& m, int steps) {
        const auto q = build_quantum_states(m);
        const auto kraus = make_kraus_set(q);
        auto state = initial_protocol_state(q, stationary_distribution(m),
                                            ProtocolInit::stationary_mixture());
        for (int i = 0; i < steps; ++i) {
            constant_entropy_step(state, kraus);
            CHECK(std::abs(trace(state.rho) - 1.0) < 1e-10);
        }
    };
    check_traces(perturbed_coin(0.1), 5);
    check_traces(coin_lattice(2, 0.3), 5);
    for (int i = 0; i < 10; ++i) check_traces(random_unifilar_machine(rng), 3);
}

TEST_CASE("constant-entropy evolution never consumes randomness") {
    const auto m = perturbed_coin(0.3);
    const auto a = run_protocol(m, 6, ProtocolMode::constant_entropy, 1);
    const auto b = run_protocol(m, 6, ProtocolMode::constant_entropy, 999);
    REQUIRE(a.entropy_log.size() == b.entropy_log.size());
    for (std::size_t i = 0; i < a.entropy_log.size(); ++i)
        CHECK(a.entropy_log[i].second == b.entropy_log[i].second);  // bitwise equal
    CHECK(a.rho.data == b.rho.data);
}

TEST_CASE("overlap monotonicity") {
    auto min_entry = [](const Matrix& d) {
        double lo = 0.0;
        for (double v : d.data) lo = std::min(lo, v);
        return lo;
    };
    CHECK(min_entry(overlap_monotonicity_check(build_quantum_states(perturbed_coin(0.25)))) >=
          -1e-10);

    // orthogonal states stay orthogonal
    const auto diff = overlap_monotonicity_check(build_quantum_states(alternating_switches()));
    CHECK(std::abs(diff(0, 1)) < 1e-12);

    Rng rng(2468);
    for (int i = 0; i < 100; ++i) {
        const auto m = random_unifilar_machine(rng);
        CHECK(min_entry(overlap_monotonicity_check(build_quantum_states(m))) >= -1e-10);
    }
}

TEST_CASE("measure-prepare run reproduces classical block statistics") {
    const auto m = perturbed_coin(0.25);
    const std::size_t n = 100000;
    const auto quantum = run_protocol(m, static_cast<int>(n), ProtocolMode::measure_prepare, 37,
                                      ProtocolInit::pure_state(0));
    REQUIRE(quantum.emitted.symbols.size() == n);
    const auto classical = simulate(m, 0, n, 101);
    const double distance = l1_distance(block_distribution(quantum.emitted.symbols, 3),
                                        block_distribution(classical.symbols, 3));
    CHECK(distance < 0.01);
    // entropy log reports the pure re-prepared subsystem
    for (const auto& [step, h] : quantum.entropy_log) CHECK(h == 0.0);
}

TEST_CASE("run_protocol argument errors and budget") {
    const auto m = perturbed_coin(0.25);
    CHECK_THROWS_AS(run_protocol(m, 0, ProtocolMode::constant_entropy, 0), validation_error);
    // 32 symbols x 32 states: enlarged system dimension 32^3 is too big
    CHECK_THROWS_AS(run_protocol(coin_lattice(5, 0.3), 1, ProtocolMode::constant_entropy, 0),
                    budget_error);
}
