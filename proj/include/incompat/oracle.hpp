#pragma once

#include <cstdint>

#include "incompat/discrimination.hpp"
#include "incompat/measurement.hpp"

// Brute-force references, independent of the SDP/LP code paths. Feasible-point
// searches certify one direction only; decisive statements pair them with a
// solver certificate.

namespace incompat {

/// Exact maximum of the guessing probability over all deterministic strategy
/// tables x = f(y), g = h(a, y). Enumerates every table.
double brute_pguess(const DiscriminationGame& game, const MeasurementSet& m,
                    std::int64_t cap = 10000000);

/// Lower bound on the compatible guessing probability from a random-restart
/// local search over string-indexed POVMs.
double brute_compatible(const DiscriminationGame& game, int restarts, std::uint64_t seed);

/// Feasible-parent search by penalised local descent. true certifies joint
/// measurability (within the penalty tolerance); false is inconclusive.
bool brute_jm(const MeasurementSet& m, int restarts, std::uint64_t seed);

}  // namespace incompat
