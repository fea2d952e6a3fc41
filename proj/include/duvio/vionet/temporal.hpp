#pragma once

#include <utility>
#include <vector>

#include "duvio/nn/layers.hpp"
#include "duvio/vionet/config.hpp"

namespace duvio {

// Hidden and cell tensors per LSTM layer, each [N, lstm_hidden].
struct RecurrentState {
  std::vector<nn::Var> h;
  std::vector<nn::Var> c;
};

struct LstmLayer {
  nn::Var w_ih;  // [4H, I], gate order i, f, g, o
  nn::Var w_hh;  // [4H, H]
  nn::Var bias;  // [4H]

  LstmLayer() = default;
  LstmLayer(std::size_t input, std::size_t hidden, nn::Rng& rng);
  // Gates from precomputed input projection `xw` [N,4H].
  std::pair<nn::Var, nn::Var> cell(const nn::Var& xw, const nn::Var& h, const nn::Var& c) const;
  void collect(nn::ParamSet& set, const std::string& prefix) const;
};

// Stacked LSTM followed by a two-layer MLP regressing (v, phi).
class TemporalModel {
 public:
  TemporalModel() = default;
  TemporalModel(const VioConfig& cfg, nn::Rng& rng);

  RecurrentState zero_state(std::size_t batch) const;
  // One time step: z [N,F] -> ([N,6], next state). Throws ShapeError when the
  // state does not match the configured layers/width.
  std::pair<nn::Var, RecurrentState> step(const nn::Var& z, const RecurrentState& state) const;
  // T steps, layer by layer with batched input projections. Returns one
  // [N,6] output per step; `state` is updated in place.
  std::vector<nn::Var> rollout(const std::vector<nn::Var>& z, RecurrentState& state) const;

  nn::Var regress(const nn::Var& h) const;
  void collect(nn::ParamSet& set, const std::string& prefix) const;
  std::size_t hidden() const { return hidden_; }

 private:
  void check_state(const RecurrentState& state, std::size_t batch) const;

  std::size_t hidden_ = 0;
  double slope_ = 0.1;
  std::vector<LstmLayer> layers_;
  nn::Linear fc1_;
  nn::Linear fc2_;
};

}  // namespace duvio
