#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "duvio/core/image.hpp"
#include "duvio/nn/layers.hpp"

namespace duvio {

enum class Backbone { dense, resnet, vit, mobile, vgg };

std::string_view to_string(Backbone b);
Backbone parse_backbone(std::string_view name);

struct GeneratorConfig {
  Backbone backbone = Backbone::dense;
  std::size_t base_channels = 16;
  std::size_t depth = 3;
  bool skip_connections = true;
  // Adds logit(input) before the output sigmoid so an untrained network starts
  // near the identity map.
  bool input_residual = true;
  std::size_t width = 64;
  std::size_t height = 32;
  std::uint64_t seed = 1;

  // Empty when valid.
  std::vector<std::string> problems() const;
  void validate() const;
};

nlohmann::json to_json(const GeneratorConfig& cfg);
GeneratorConfig generator_config_from_json(const nlohmann::json& j);

namespace detail {
struct BackboneBlock {
  Backbone kind = Backbone::dense;
  std::vector<nn::Conv2d> convs;
  std::size_t window = 1;

  BackboneBlock() = default;
  BackboneBlock(Backbone kind, std::size_t channels, std::size_t h, std::size_t w, nn::Rng& rng);
  nn::Var operator()(const nn::Var& x) const;
  void collect(nn::ParamSet& set, const std::string& prefix) const;
};
}  // namespace detail

// Encoder-decoder with optional skip connections; output in (0,1).
class Generator {
 public:
  explicit Generator(GeneratorConfig cfg);

  // x [N,1,H,W] with H,W equal to the configured size.
  nn::Var forward(const nn::Var& x) const;
  // Inference on one raster; throws ShapeError on a size mismatch.
  Image generate(const Image& hazy) const;

  const GeneratorConfig& config() const { return cfg_; }
  nn::ParamSet& params() { return params_; }
  const nn::ParamSet& params() const { return params_; }

  // Copies matching "encoder.*" tensors from an externally trained model.
  // Returns the number of tensors imported; shape mismatches throw.
  std::size_t import_encoder_weights(const std::map<std::string, Tensor>& tensors);

 private:
  GeneratorConfig cfg_;
  nn::Conv2d stem_;
  std::vector<nn::Conv2d> down_;
  std::vector<detail::BackboneBlock> blocks_;
  std::vector<nn::ConvTranspose2d> up_;
  std::vector<nn::Conv2d> merge_;
  nn::Conv2d head_;
  nn::ParamSet params_;
};

// Raster <-> [1,1,H,W] tensor.
Tensor image_to_tensor(const Image& img);
Image tensor_to_image(const Tensor& t, std::size_t index = 0);
// Stacks rasters of equal size into [N,1,H,W].
Tensor images_to_batch(const std::vector<const Image*>& images);

}  // namespace duvio
