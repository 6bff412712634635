#include "ladderflow/entropy.hpp"

#include <cmath>

#include "ladderflow/errors.hpp"

namespace ladderflow {

double entropy_per_site(std::span<const double> amplitudes, int rungs) {
    if (rungs < 1) throw InvalidArgumentError("entropy_per_site: rungs must be positive");
    double s = 0.0;
    for (double a : amplitudes) {
        const double p = a * a;
        if (p > 0.0) s -= p * std::log(p);
    }
    return s / (2.0 * rungs);
}

double entropy_per_site(const EigenPair& ground, int rungs) {
    return entropy_per_site(ground.vector, rungs);
}

} // namespace ladderflow
