#pragma once

#include <vector>

#include "duvio/dataio/types.hpp"
#include "duvio/nn/autograd.hpp"

namespace duvio {

// Mean over steps of |v_hat - v|^2 + alpha * |phi_hat - phi|^2.
double pose_loss(const std::vector<PoseDelta>& predictions, const std::vector<PoseDelta>& targets,
                 double alpha);

// Differentiable form: predictions [M,6] as (v, phi) rows, targets [M,6].
nn::Var pose_loss(const nn::Var& predictions, const Tensor& targets, double alpha);

Tensor deltas_to_tensor(const std::vector<PoseDelta>& deltas);
std::vector<PoseDelta> tensor_to_deltas(const Tensor& t);

}  // namespace duvio
