#include "qem/processes.hpp"

#include <bit>
#include <string>

namespace qem {

namespace {

Alphabet binary_alphabet() { return {{"0", "1"}}; }

std::vector<std::string> numbered(const std::string& prefix, int count) {
    std::vector<std::string> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

}  // namespace

EpsilonMachine perturbed_coin(double p) {
    if (!(p > 0.0 && p < 1.0) || p == 0.5)
        throw validation_error("perturbed_coin: p must be in (0, 1) and p != 0.5");
    EpsilonMachine m(binary_alphabet(), {"S0", "S1"});
    // the emitted symbol is the new coin face, so the target state and the
    // symbol always coincide
    m.set_t(0, 0, 0, 1.0 - p);
    m.set_t(0, 1, 1, p);
    m.set_t(1, 1, 1, 1.0 - p);
    m.set_t(1, 0, 0, p);
    return m;
}

EpsilonMachine coin_lattice(int k, double p) {
    if (k < 1 || k > 6) throw validation_error("coin_lattice: K must be in [1, 6]");
    if (!(p > 0.0 && p < 1.0) || p == 0.5)
        throw validation_error("coin_lattice: p must be in (0, 1) and p != 0.5");

    const int n = 1 << k;  // configurations; coin 0 is the least significant bit
    Alphabet alphabet;
    for (int c = 0; c < n; ++c) alphabet.symbols.push_back(std::to_string(c));
    EpsilonMachine m(std::move(alphabet), numbered("S", n));

    for (int from = 0; from < n; ++from)
        for (int to = 0; to < n; ++to) {
            const int flips = std::popcount(static_cast<unsigned>(from ^ to));
            double prob = 1.0;
            for (int i = 0; i < flips; ++i) prob *= p;
            for (int i = 0; i < k - flips; ++i) prob *= 1.0 - p;
            m.set_t(from, to, to, prob);  // observed symbol = new configuration
        }
    return m;
}

EpsilonMachine alternating_switches() {
    EpsilonMachine m(binary_alphabet(), {"S0", "S1"});
    m.set_t(0, 1, 1, 1.0);
    m.set_t(1, 0, 0, 1.0);
    return m;
}

EpsilonMachine iid_coin(double q) {
    if (!(q > 0.0 && q < 1.0)) throw validation_error("iid_coin: q must be in (0, 1)");
    EpsilonMachine m(binary_alphabet(), {"S0"});
    m.set_t(0, 0, 0, 1.0 - q);
    m.set_t(0, 0, 1, q);
    return m;
}

const std::vector<ProcessSpec>& process_catalog() {
    static const std::vector<ProcessSpec> catalog = {
        {"perturbed-coin", "p in (0,1), p != 0.5",
         "two-state coin that flips with probability p; symbol = new face"},
        {"coin-lattice", "K in [1,6]; p in (0,1), p != 0.5",
         "K independent perturbed coins; symbol = new configuration (coin 0 = LSB)"},
        {"alternating-switches", "(none)", "deterministic alternation of 0s and 1s"},
        {"iid-coin", "q in (0,1)", "single-state i.i.d. coin, emits 1 with probability q"},
    };
    return catalog;
}

}  // namespace qem
