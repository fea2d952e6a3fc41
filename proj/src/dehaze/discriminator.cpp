#include "duvio/dehaze/discriminator.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/dehaze/generator.hpp"

namespace duvio {

using nn::Var;

std::vector<std::string> DiscriminatorConfig::problems() const {
  std::vector<std::string> out;
  if (layers < 3) out.push_back(fmt::format("discriminator.layers must be >= 3 (got {})", layers));
  if (base_channels == 0) out.push_back("discriminator.base_channels must be > 0");
  if (slope < 0.0) out.push_back("discriminator.slope must be >= 0");
  return out;
}

void DiscriminatorConfig::validate() const {
  if (auto p = problems(); !p.empty()) throw ConfigError(std::move(p));
}

nlohmann::json to_json(const DiscriminatorConfig& cfg) {
  return {{"layers", cfg.layers},         {"base_channels", cfg.base_channels},
          {"batch_norm", cfg.batch_norm}, {"slope", cfg.slope},
          {"patch_output", cfg.patch_output}, {"seed", cfg.seed}};
}

DiscriminatorConfig discriminator_config_from_json(const nlohmann::json& j) {
  DiscriminatorConfig cfg;
  cfg.layers = j.at("layers").get<std::size_t>();
  cfg.base_channels = j.at("base_channels").get<std::size_t>();
  cfg.batch_norm = j.at("batch_norm").get<bool>();
  cfg.slope = j.at("slope").get<double>();
  cfg.patch_output = j.at("patch_output").get<bool>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

Discriminator::Discriminator(DiscriminatorConfig cfg, std::size_t width, std::size_t height)
    : cfg_(cfg), width_(width), height_(height) {
  cfg_.validate();
  // All but the last conv halve the raster.
  const std::size_t unit = std::size_t{1} << std::min<std::size_t>(cfg_.layers - 1, 20);
  if (width < unit || height < unit) {
    throw ConfigError({fmt::format("discriminator with {} layers needs input >= {}x{}, got {}x{}",
                                   cfg_.layers, unit, unit, width, height)});
  }
  nn::Rng rng(cfg_.seed);
  std::size_t c = 1;
  for (std::size_t i = 0; i + 1 < cfg_.layers; ++i) {
    const std::size_t out = cfg_.base_channels << std::min<std::size_t>(i, 3);
    convs_.emplace_back(c, out, 4, 4, nn::Conv2dOptions::square(2, 1), rng, cfg_.slope,
                        !(cfg_.batch_norm && i > 0));
    if (cfg_.batch_norm && i > 0) norms_.emplace_back(out);
    c = out;
  }
  convs_.emplace_back(c, 1, 3, 3, nn::Conv2dOptions::square(1, 1), rng, 1.0);

  for (std::size_t i = 0; i < convs_.size(); ++i) {
    convs_[i].collect(params_, fmt::format("conv{}", i));
    if (cfg_.batch_norm && i > 0 && i + 1 < convs_.size())
      norms_[i - 1].collect(params_, fmt::format("norm{}", i));
  }
}

Var Discriminator::forward(const Var& x, bool training) {
  if (x.shape().size() != 4 || x.dim(1) != 1 || x.dim(2) != height_ || x.dim(3) != width_) {
    throw ShapeError(fmt::format("discriminator: expected [N,1,{},{}], got {}", height_, width_,
                                 to_string(x.shape())));
  }
  Var h = x;
  for (std::size_t i = 0; i + 1 < convs_.size(); ++i) {
    h = convs_[i](h);
    if (cfg_.batch_norm && i > 0) h = norms_[i - 1](h, training);
    h = nn::leaky_relu(h, cfg_.slope);
  }
  const Var logits = convs_.back()(h);
  return cfg_.patch_output ? logits : nn::global_avg_pool(logits);
}

double Discriminator::discriminate(const Image& img) {
  if (img.width() != width_ || img.height() != height_) {
    throw ShapeError(fmt::format("discriminate: expected {}x{} raster, got {}x{}", width_,
                                 height_, img.width(), img.height()));
  }
  nn::NoGradGuard guard;
  const Var logits = forward(Var(image_to_tensor(img)), false);
  const Var pooled = cfg_.patch_output ? nn::global_avg_pool(logits) : logits;
  return nn::sigmoid(pooled).value()[0];
}

}  // namespace duvio
