#include "duvio/eval/trajectory.hpp"

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/dataio/geometry.hpp"

namespace duvio {

std::vector<AbsolutePose> integrate_trajectory(const AbsolutePose& start,
                                               const std::vector<PoseDelta>& deltas,
                                               const std::vector<double>& times) {
  if (!times.empty() && times.size() != deltas.size() + 1) {
    throw ValidationError(fmt::format("integrate_trajectory: {} timestamps for {} deltas",
                                      times.size(), deltas.size()),
                          times.size());
  }
  std::vector<AbsolutePose> out{start};
  if (!times.empty()) out.front().timestamp = times.front();
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!deltas[i].v.allFinite() || !deltas[i].phi.allFinite())
      throw ValidationError(fmt::format("integrate_trajectory: delta {} is not finite", i), i);
    const double t = times.empty() ? start.timestamp + static_cast<double>(i + 1) : times[i + 1];
    out.push_back(compose(out.back(), deltas[i], t));
  }
  return out;
}

}  // namespace duvio
