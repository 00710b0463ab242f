#include "qem/irreversibility.hpp"

#include <sstream>

namespace qem {

std::vector<Configuration> emission_configurations(const EpsilonMachine& m) {
    std::vector<Configuration> out;
    for (int j = 0; j < m.n_states(); ++j)
        for (int r = 0; r < m.n_symbols(); ++r)
            if (m.successor(j, r) >= 0) out.push_back({j, r});
    return out;
}

Configuration transition_function(const EpsilonMachine& m, Configuration config) {
    if (config.state < 0 || config.state >= m.n_states() || config.symbol < 0 ||
        config.symbol >= m.n_symbols())
        throw validation_error("transition_function: configuration indices out of range");
    const int succ = m.successor(config.state, config.symbol);
    if (succ < 0) {
        std::ostringstream os;
        os << "transition_function: (" << config.state << ", " << config.symbol
           << ") is not a valid emission configuration";
        throw validation_error(os.str());
    }
    return {succ, config.symbol};
}

std::optional<IrreversibilityWitness> find_witness(const EpsilonMachine& m) {
    const int n = m.n_states();
    const int a = m.n_symbols();
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            for (int l = 0; l < n; ++l)
                for (int r = 0; r < a; ++r)
                    if (m.t(j, l, r) > kStructuralFloor && m.t(k, l, r) > kStructuralFloor)
                        return IrreversibilityWitness{j, k, l, r};
        }
    return std::nullopt;
}

}  // namespace qem
