#pragma once

#include <array>
#include <vector>

#include "duvio/core/error.hpp"
#include "duvio/dataio/types.hpp"

namespace duvio {

enum class RmseMode {
  pooled,  // sqrt(sum |e|^2 / (3T))
  norm,    // sqrt(sum |e|^2 / T)
};

struct RmseOptions {
  RmseMode mode = RmseMode::pooled;
  // Rotation error as the angle of R(phi_hat)^T R(phi) instead of the Euler
  // difference; the angle is a scalar, so both modes use sqrt(sum a^2 / T).
  bool geodesic_rotation = false;
};

struct RmsePair {
  double v_rmse = 0.0;    // meters
  double phi_rmse = 0.0;  // radians
};

RmsePair compute_rmse(const std::vector<PoseDelta>& predictions,
                      const std::vector<PoseDelta>& references, const RmseOptions& options = {});

// Contiguous thirds; the earliest thirds take the remainder.
template <typename T>
std::array<std::vector<T>, 3> split_three(const std::vector<T>& items) {
  if (items.size() < 3) throw ValidationError("split_three: need at least 3 items", items.size());
  const std::size_t base = items.size() / 3, extra = items.size() % 3;
  std::array<std::vector<T>, 3> out;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t len = base + (k < extra ? 1 : 0);
    out[k].assign(items.begin() + static_cast<long>(pos), items.begin() + static_cast<long>(pos + len));
    pos += len;
  }
  return out;
}

}  // namespace duvio
