#include "qem/rng.hpp"

namespace qem {

int sample_index(std::span<const double> probs, Rng& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last_positive = static_cast<int>(i);
        acc += probs[i];
        if (u < acc) return last_positive;
    }
    // u landed in the rounding slack past the accumulated total
    return last_positive;
}

}  // namespace qem
