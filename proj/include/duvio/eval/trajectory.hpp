#pragma once

#include <vector>

#include "duvio/dataio/types.hpp"

namespace duvio {

// Poses start, start*d0, start*d0*d1, ... (N deltas -> N+1 poses). `times`
// is either empty (timestamps count up from start.timestamp in steps of 1)
// or holds N+1 timestamps.
std::vector<AbsolutePose> integrate_trajectory(const AbsolutePose& start,
                                               const std::vector<PoseDelta>& deltas,
                                               const std::vector<double>& times = {});

}  // namespace duvio
