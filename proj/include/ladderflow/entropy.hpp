#pragma once

#include <span>

#include "ladderflow/eigensolver.hpp"

namespace ladderflow {

/// Basis-amplitude entropy per site, s = -(1/2L) sum_i P_i ln P_i with
/// P_i = |a_i|^2 and 0 ln 0 = 0.
double entropy_per_site(std::span<const double> amplitudes, int rungs);
double entropy_per_site(const EigenPair& ground, int rungs);

} // namespace ladderflow
