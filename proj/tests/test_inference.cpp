#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qem/inference.hpp"
#include "qem/processes.hpp"

using namespace qem;

namespace {

InferenceConfig config(int l, int f, double tol, long long min_count = 10) {
    InferenceConfig c;
    c.history_length = l;
    c.future_length = f;
    c.merge_tolerance = tol;
    c.min_count = min_count;
    return c;
}

// largest |T_est - T_true| over the tensor, matching states by the emitted
// symbol (coin states are identified by their last symbol)
double coin_tensor_error(const EpsilonMachine& est, double p) {
    const auto truth = perturbed_coin(p);
    double err = 0.0;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            for (int r = 0; r < 2; ++r)
                err = std::max(err, std::abs(est.t(j, k, r) - truth.t(j, k, r)));
    return err;
}

}  // namespace

TEST_CASE("recovers the perturbed coin") {
    const auto data = simulate(perturbed_coin(0.25), 0, 1'000'000, 20250809);
    const auto result = infer_machine(data.symbols, {{"0", "1"}}, config(1, 3, 0.05));

    CHECK(result.diagnostics.cluster_count == 2);
    CHECK(result.diagnostics.repairs.empty());
    CHECK(validate(result.machine).empty());

    // history "0" is lexicographically first, so S0 is the face-0 state
    const double p_est = result.machine.t(0, 1, 1);
    CHECK(std::abs(p_est - 0.25) < 0.01);
    CHECK(coin_tensor_error(result.machine, 0.25) < 0.01);
}

TEST_CASE("recovers the alternating process with deterministic transitions") {
    const auto data = simulate(alternating_switches(), 0, 100000, 3);
    const auto result = infer_machine(data.symbols, {{"0", "1"}}, config(1, 1, 0.05));

    CHECK(result.diagnostics.cluster_count == 2);
    CHECK(validate(result.machine).empty());
    // transitions must be exactly deterministic
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            for (int r = 0; r < 2; ++r) {
                const double v = result.machine.t(j, k, r);
                CHECK((v == 0.0 || v == 1.0));
            }
}

TEST_CASE("iid data collapses to one cluster") {
    const auto data = simulate(iid_coin(0.5), 0, 1'000'000, 77);
    const auto result = infer_machine(data.symbols, {{"0", "1"}}, config(3, 3, 0.05));
    CHECK(result.diagnostics.cluster_count == 1);
    CHECK(validate(result.machine).empty());
}

TEST_CASE("self-consistency: inferring from the inferred machine is stable") {
    const auto data = simulate(perturbed_coin(0.25), 0, 400000, 11);
    const auto first = infer_machine(data.symbols, {{"0", "1"}}, config(1, 3, 0.05));
    const auto replay = simulate(first.machine, 0, 400000, 12);
    const auto second = infer_machine(replay.symbols, {{"0", "1"}}, config(1, 3, 0.05));
    CHECK(first.diagnostics.cluster_count == second.diagnostics.cluster_count);
}

TEST_CASE("estimates tighten as the sample grows") {
    const auto small = simulate(perturbed_coin(0.25), 0, 10000, 5150);
    const auto large = simulate(perturbed_coin(0.25), 0, 1'000'000, 5150);
    const auto est_small = infer_machine(small.symbols, {{"0", "1"}}, config(1, 3, 0.05));
    const auto est_large = infer_machine(large.symbols, {{"0", "1"}}, config(1, 3, 0.05));
    REQUIRE(est_small.diagnostics.cluster_count == 2);
    REQUIRE(est_large.diagnostics.cluster_count == 2);
    CHECK(coin_tensor_error(est_large.machine, 0.25) <
          coin_tensor_error(est_small.machine, 0.25));
}

TEST_CASE("argument validation") {
    const std::vector<int> tiny{0, 1, 0};
    const Alphabet binary{{"0", "1"}};
    CHECK_THROWS_AS(infer_machine({}, binary, config(1, 1, 0.05)), validation_error);
    CHECK_THROWS_AS(infer_machine(tiny, binary, config(2, 2, 0.05)), validation_error);
    CHECK_THROWS_AS(infer_machine(tiny, binary, config(0, 1, 0.05)), validation_error);
    CHECK_THROWS_AS(infer_machine(tiny, binary, config(1, 1, 0.0)), validation_error);
    CHECK_THROWS_AS(infer_machine(tiny, binary, config(1, 1, 0.05, 0)), validation_error);
    // |alphabet|^(L+F) budget
    CHECK_THROWS_AS(infer_machine(tiny, binary, config(13, 13, 0.05)), validation_error);

    // all histories below min_count
    const auto data = simulate(perturbed_coin(0.25), 0, 50, 1);
    CHECK_THROWS_AS(infer_machine(data.symbols, binary, config(1, 1, 0.05, 1000)),
                    validation_error);
}

TEST_CASE("short data produces a warning") {
    const auto data = simulate(perturbed_coin(0.25), 0, 500, 9);
    const auto result = infer_machine(data.symbols, {{"0", "1"}}, config(2, 3, 0.05, 2));
    CHECK_FALSE(result.diagnostics.warnings.empty());
}
