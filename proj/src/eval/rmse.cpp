#include "duvio/eval/rmse.hpp"

#include <cmath>

#include <fmt/format.h>

#include "duvio/dataio/geometry.hpp"

namespace duvio {

RmsePair compute_rmse(const std::vector<PoseDelta>& predictions,
                      const std::vector<PoseDelta>& references, const RmseOptions& options) {
  if (predictions.size() != references.size() || predictions.empty()) {
    throw ValidationError(fmt::format("compute_rmse: {} predictions vs {} references",
                                      predictions.size(), references.size()),
                          std::min(predictions.size(), references.size()));
  }
  double sv = 0.0, sp = 0.0;
  for (std::size_t t = 0; t < predictions.size(); ++t) {
    sv += (predictions[t].v - references[t].v).squaredNorm();
    if (options.geodesic_rotation) {
      const Eigen::Matrix3d rel = euler_xyz_to_matrix(predictions[t].phi).transpose() *
                                  euler_xyz_to_matrix(references[t].phi);
      const double angle = Eigen::AngleAxisd(rel).angle();
      sp += angle * angle;
    } else {
      sp += (predictions[t].phi - references[t].phi).squaredNorm();
    }
  }
  const auto n = static_cast<double>(predictions.size());
  const double axes = options.mode == RmseMode::pooled ? 3.0 : 1.0;
  return {std::sqrt(sv / (axes * n)), std::sqrt(sp / ((options.geodesic_rotation ? 1.0 : axes) * n))};
}

}  // namespace duvio
