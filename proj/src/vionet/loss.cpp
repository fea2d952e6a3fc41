#include "duvio/vionet/loss.hpp"

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/nn/ops.hpp"

namespace duvio {

double pose_loss(const std::vector<PoseDelta>& predictions, const std::vector<PoseDelta>& targets,
                 double alpha) {
  if (predictions.size() != targets.size() || predictions.empty()) {
    throw ValidationError(fmt::format("pose_loss: {} predictions vs {} targets",
                                      predictions.size(), targets.size()),
                          std::min(predictions.size(), targets.size()));
  }
  if (!(alpha >= 0.0)) throw RangeError("pose_loss: alpha must be >= 0");
  double acc = 0.0;
  for (std::size_t t = 0; t < predictions.size(); ++t) {
    acc += (predictions[t].v - targets[t].v).squaredNorm() +
           alpha * (predictions[t].phi - targets[t].phi).squaredNorm();
  }
  return acc / static_cast<double>(predictions.size());
}

nn::Var pose_loss(const nn::Var& predictions, const Tensor& targets, double alpha) {
  if (predictions.shape() != targets.shape() || predictions.shape().size() != 2 ||
      predictions.dim(1) != 6 || predictions.dim(0) == 0) {
    throw ShapeError(fmt::format("pose_loss: predictions {} vs targets {}",
                                 to_string(predictions.shape()), to_string(targets.shape())));
  }
  if (!(alpha >= 0.0)) throw RangeError("pose_loss: alpha must be >= 0");
  const std::size_t m = predictions.dim(0);
  Tensor weights({m, 6});
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k < 6; ++k) weights[r * 6 + k] = k < 3 ? 1.0 : alpha;
  const nn::Var diff = nn::sub(predictions, nn::Var(targets));
  const nn::Var weighted = nn::mul(nn::mul(diff, diff), nn::Var(std::move(weights)));
  return nn::scale(nn::sum(weighted), 1.0 / static_cast<double>(m));
}

Tensor deltas_to_tensor(const std::vector<PoseDelta>& deltas) {
  Tensor t({deltas.size(), 6});
  for (std::size_t r = 0; r < deltas.size(); ++r)
    for (int k = 0; k < 3; ++k) {
      t[r * 6 + static_cast<std::size_t>(k)] = deltas[r].v[k];
      t[r * 6 + 3 + static_cast<std::size_t>(k)] = deltas[r].phi[k];
    }
  return t;
}

std::vector<PoseDelta> tensor_to_deltas(const Tensor& t) {
  std::vector<PoseDelta> out(t.dim(0));
  for (std::size_t r = 0; r < out.size(); ++r)
    for (int k = 0; k < 3; ++k) {
      out[r].v[k] = t[r * 6 + static_cast<std::size_t>(k)];
      out[r].phi[k] = t[r * 6 + 3 + static_cast<std::size_t>(k)];
    }
  return out;
}

}  // namespace duvio
