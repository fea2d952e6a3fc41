#include "duvio/vionet/temporal.hpp"

#include <cmath>

#include <fmt/format.h>

#include "duvio/core/error.hpp"

namespace duvio {

using nn::Var;

LstmLayer::LstmLayer(std::size_t input, std::size_t hidden, nn::Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  std::uniform_real_distribution<double> dist(-bound, bound);
  auto fill = [&](Shape shape) {
    Tensor t(std::move(shape));
    for (double& v : t.values()) v = dist(rng);
    return Var(std::move(t), true);
  };
  w_ih = fill({4 * hidden, input});
  w_hh = fill({4 * hidden, hidden});
  bias = fill({4 * hidden});
}

std::pair<Var, Var> LstmLayer::cell(const Var& xw, const Var& h, const Var& c) const {
  const std::size_t hidden = c.dim(1);
  const Var gates = nn::add(xw, nn::linear(h, w_hh, Var()));
  const Var i = nn::sigmoid(nn::narrow(gates, 1, 0, hidden));
  const Var f = nn::sigmoid(nn::narrow(gates, 1, hidden, hidden));
  const Var g = nn::tanh(nn::narrow(gates, 1, 2 * hidden, hidden));
  const Var o = nn::sigmoid(nn::narrow(gates, 1, 3 * hidden, hidden));
  const Var c_next = nn::add(nn::mul(f, c), nn::mul(i, g));
  const Var h_next = nn::mul(o, nn::tanh(c_next));
  return {h_next, c_next};
}

void LstmLayer::collect(nn::ParamSet& set, const std::string& prefix) const {
  set.add(prefix + ".w_ih", w_ih);
  set.add(prefix + ".w_hh", w_hh);
  set.add(prefix + ".bias", bias);
}

TemporalModel::TemporalModel(const VioConfig& cfg, nn::Rng& rng)
    : hidden_(cfg.lstm_hidden), slope_(cfg.leaky_slope) {
  std::size_t in = cfg.fused_size();
  for (std::size_t l = 0; l < cfg.lstm_layers; ++l) {
    layers_.emplace_back(in, hidden_, rng);
    in = hidden_;
  }
  fc1_ = nn::Linear(hidden_, cfg.mlp_hidden, rng, slope_);
  fc2_ = nn::Linear(cfg.mlp_hidden, 6, rng, 1.0);
}

RecurrentState TemporalModel::zero_state(std::size_t batch) const {
  RecurrentState s;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    s.h.emplace_back(Tensor({batch, hidden_}));
    s.c.emplace_back(Tensor({batch, hidden_}));
  }
  return s;
}

void TemporalModel::check_state(const RecurrentState& state, std::size_t batch) const {
  bool ok = state.h.size() == layers_.size() && state.c.size() == layers_.size();
  for (std::size_t l = 0; ok && l < layers_.size(); ++l) {
    const Shape want{batch, hidden_};
    ok = state.h[l].defined() && state.c[l].defined() && state.h[l].shape() == want &&
         state.c[l].shape() == want;
  }
  if (!ok) {
    throw ShapeError(fmt::format("recurrent state: expected {} layers of [{}x{}] hidden/cell",
                                 layers_.size(), batch, hidden_));
  }
}

Var TemporalModel::regress(const Var& h) const {
  return fc2_(nn::leaky_relu(fc1_(h), slope_));
}

std::pair<Var, RecurrentState> TemporalModel::step(const Var& z, const RecurrentState& state) const {
  check_state(state, z.dim(0));
  RecurrentState next;
  Var input = z;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LstmLayer& layer = layers_[l];
    auto [h, c] = layer.cell(nn::linear(input, layer.w_ih, layer.bias), state.h[l], state.c[l]);
    next.h.push_back(h);
    next.c.push_back(c);
    input = h;
  }
  return {regress(input), std::move(next)};
}

std::vector<Var> TemporalModel::rollout(const std::vector<Var>& z, RecurrentState& state) const {
  if (z.empty()) return {};
  const std::size_t batch = z.front().dim(0);
  check_state(state, batch);
  const std::size_t steps = z.size();
  Var sequence = nn::concat(z, 0);  // [T*N, F]
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LstmLayer& layer = layers_[l];
    const Var projected = nn::linear(sequence, layer.w_ih, layer.bias);
    std::vector<Var> outputs;
    Var h = state.h[l], c = state.c[l];
    for (std::size_t t = 0; t < steps; ++t) {
      std::tie(h, c) = layer.cell(nn::narrow(projected, 0, t * batch, batch), h, c);
      outputs.push_back(h);
    }
    state.h[l] = h;
    state.c[l] = c;
    sequence = nn::concat(outputs, 0);
  }
  const Var regressed = regress(sequence);
  std::vector<Var> out;
  for (std::size_t t = 0; t < steps; ++t) out.push_back(nn::narrow(regressed, 0, t * batch, batch));
  return out;
}

void TemporalModel::collect(nn::ParamSet& set, const std::string& prefix) const {
  for (std::size_t l = 0; l < layers_.size(); ++l) layers_[l].collect(set, fmt::format("{}.lstm{}", prefix, l));
  fc1_.collect(set, prefix + ".fc1");
  fc2_.collect(set, prefix + ".fc2");
}

}  // namespace duvio
