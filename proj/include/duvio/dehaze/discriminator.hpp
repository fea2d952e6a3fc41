#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "duvio/core/image.hpp"
#include "duvio/nn/layers.hpp"

namespace duvio {

struct DiscriminatorConfig {
  std::size_t layers = 3;
  std::size_t base_channels = 16;
  bool batch_norm = true;
  double slope = 0.2;
  // Keep the per-patch logit map instead of pooling to one score.
  bool patch_output = false;
  std::uint64_t seed = 2;

  std::vector<std::string> problems() const;
  void validate() const;
};

nlohmann::json to_json(const DiscriminatorConfig& cfg);
DiscriminatorConfig discriminator_config_from_json(const nlohmann::json& j);

class Discriminator {
 public:
  Discriminator(DiscriminatorConfig cfg, std::size_t width, std::size_t height);

  // Logits: [N,1] pooled, or [N,1,h,w] with patch_output.
  nn::Var forward(const nn::Var& x, bool training);
  // Probability that `img` is a clean image, in [0,1]. Inference mode.
  double discriminate(const Image& img);

  const DiscriminatorConfig& config() const { return cfg_; }
  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  nn::ParamSet& params() { return params_; }
  const nn::ParamSet& params() const { return params_; }

 private:
  DiscriminatorConfig cfg_;
  std::size_t width_;
  std::size_t height_;
  std::vector<nn::Conv2d> convs_;
  std::vector<nn::BatchNorm> norms_;  // one per middle conv when enabled
  nn::ParamSet params_;
};

}  // namespace duvio
