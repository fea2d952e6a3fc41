#include "duvio/dehaze/generator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "duvio/core/error.hpp"

namespace duvio {

using nn::Conv2d;
using nn::Conv2dOptions;
using nn::Var;

namespace {

constexpr double kSlope = 0.2;

Var act(const Var& x) { return nn::leaky_relu(x, kSlope); }

std::size_t stage_channels(std::size_t base, std::size_t stage) {
  return base << std::min<std::size_t>(stage, 3);
}

}  // namespace

std::string_view to_string(Backbone b) {
  switch (b) {
    case Backbone::dense: return "dense";
    case Backbone::resnet: return "resnet";
    case Backbone::vit: return "vit";
    case Backbone::mobile: return "mobile";
    case Backbone::vgg: return "vgg";
  }
  return "dense";
}

Backbone parse_backbone(std::string_view name) {
  if (name == "dense") return Backbone::dense;
  if (name == "resnet") return Backbone::resnet;
  if (name == "vit") return Backbone::vit;
  if (name == "mobile") return Backbone::mobile;
  if (name == "vgg") return Backbone::vgg;
  throw ConfigError(
      {fmt::format("backbone '{}' is not one of: dense, resnet, vit, mobile, vgg", name)});
}

std::vector<std::string> GeneratorConfig::problems() const {
  std::vector<std::string> out;
  if (depth < 2) out.push_back(fmt::format("generator.depth must be >= 2 (got {})", depth));
  if (base_channels < 8)
    out.push_back(fmt::format("generator.base_channels must be >= 8 (got {})", base_channels));
  if (depth >= 2 && depth < 16) {
    const std::size_t unit = std::size_t{1} << depth;
    if (width == 0 || height == 0 || width % unit != 0 || height % unit != 0) {
      out.push_back(fmt::format("generator input {}x{} must be non-zero multiples of {}", width,
                                height, unit));
    }
  }
  return out;
}

void GeneratorConfig::validate() const {
  if (auto p = problems(); !p.empty()) throw ConfigError(std::move(p));
}

nlohmann::json to_json(const GeneratorConfig& cfg) {
  return {{"backbone", std::string(to_string(cfg.backbone))},
          {"base_channels", cfg.base_channels},
          {"depth", cfg.depth},
          {"skip_connections", cfg.skip_connections},
          {"input_residual", cfg.input_residual},
          {"width", cfg.width},
          {"height", cfg.height},
          {"seed", cfg.seed}};
}

GeneratorConfig generator_config_from_json(const nlohmann::json& j) {
  GeneratorConfig cfg;
  cfg.backbone = parse_backbone(j.at("backbone").get<std::string>());
  cfg.base_channels = j.at("base_channels").get<std::size_t>();
  cfg.depth = j.at("depth").get<std::size_t>();
  cfg.skip_connections = j.at("skip_connections").get<bool>();
  cfg.input_residual = j.at("input_residual").get<bool>();
  cfg.width = j.at("width").get<std::size_t>();
  cfg.height = j.at("height").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

namespace detail {

BackboneBlock::BackboneBlock(Backbone k, std::size_t c, std::size_t h, std::size_t w,
                             nn::Rng& rng)
    : kind(k) {
  const auto same3 = Conv2dOptions::square(1, 1);
  const auto pw = Conv2dOptions::square(1, 0);
  switch (kind) {
    case Backbone::dense: {
      const std::size_t g = std::max<std::size_t>(4, c / 2);
      convs.emplace_back(c, g, 3, 3, same3, rng, kSlope);
      convs.emplace_back(c + g, g, 3, 3, same3, rng, kSlope);
      convs.emplace_back(c + 2 * g, c, 1, 1, pw, rng, kSlope);
      break;
    }
    case Backbone::resnet:
    case Backbone::vgg:
      convs.emplace_back(c, c, 3, 3, same3, rng, kSlope);
      convs.emplace_back(c, c, 3, 3, same3, rng, kSlope);
      break;
    case Backbone::vit:
      for (int i = 0; i < 4; ++i) convs.emplace_back(c, c, 1, 1, pw, rng, 1.0);
      for (std::size_t cand : {4, 2, 1})
        if (h % cand == 0 && w % cand == 0) {
          window = cand;
          break;
        }
      break;
    case Backbone::mobile:
      convs.emplace_back(c, 2 * c, 1, 1, pw, rng, kSlope);
      convs.emplace_back(2 * c, 2 * c, 3, 3, Conv2dOptions::square(1, 1, 2 * c), rng, kSlope);
      convs.emplace_back(2 * c, c, 1, 1, pw, rng, 1.0);
      break;
  }
}

Var BackboneBlock::operator()(const Var& x) const {
  switch (kind) {
    case Backbone::dense: {
      const Var x1 = nn::concat({x, act(convs[0](x))}, 1);
      const Var x2 = nn::concat({x1, act(convs[1](x1))}, 1);
      return act(convs[2](x2));
    }
    case Backbone::resnet:
      return act(nn::add(x, convs[1](act(convs[0](x)))));
    case Backbone::vgg:
      return act(convs[1](act(convs[0](x))));
    case Backbone::mobile:
      return nn::add(x, convs[2](act(convs[1](act(convs[0](x))))));
    case Backbone::vit: {
      // Self-attention inside non-overlapping window x window tiles.
      const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
      const std::size_t win = window, nh = h / win, nw = w / win;
      auto to_tokens = [&](const Var& t) {
        const Var r = nn::reshape(t, {n, c, nh, win, nw, win});
        return nn::reshape(nn::permute(r, {0, 2, 4, 3, 5, 1}), {n * nh * nw, win * win, c});
      };
      const Var q = to_tokens(convs[0](x));
      const Var k = to_tokens(convs[1](x));
      const Var v = to_tokens(convs[2](x));
      const Var scores =
          nn::scale(nn::bmm(q, nn::permute(k, {0, 2, 1})), 1.0 / std::sqrt(static_cast<double>(c)));
      const Var attended = nn::bmm(nn::softmax_last(scores), v);
      const Var back = nn::permute(nn::reshape(attended, {n, nh, nw, win, win, c}), {0, 5, 1, 3, 2, 4});
      return nn::add(x, convs[3](nn::reshape(back, {n, c, h, w})));
    }
  }
  return x;
}

void BackboneBlock::collect(nn::ParamSet& set, const std::string& prefix) const {
  for (std::size_t i = 0; i < convs.size(); ++i) convs[i].collect(set, fmt::format("{}.conv{}", prefix, i));
}

}  // namespace detail

Generator::Generator(GeneratorConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  nn::Rng rng(cfg_.seed);
  const std::size_t c0 = cfg_.base_channels;
  stem_ = Conv2d(1, c0, 3, 3, Conv2dOptions::square(1, 1), rng, kSlope);
  std::size_t h = cfg_.height, w = cfg_.width;
  for (std::size_t i = 1; i <= cfg_.depth; ++i) {
    const std::size_t cin = stage_channels(c0, i - 1), cout = stage_channels(c0, i);
    h /= 2;
    w /= 2;
    down_.emplace_back(cin, cout, 4, 4, Conv2dOptions::square(2, 1), rng, kSlope);
    blocks_.emplace_back(cfg_.backbone, cout, h, w, rng);
  }
  for (std::size_t i = cfg_.depth; i >= 1; --i) {
    const std::size_t cin = stage_channels(c0, i), cout = stage_channels(c0, i - 1);
    up_.emplace_back(cin, cout, 4, 2, 1, rng, kSlope);
    merge_.emplace_back(cfg_.skip_connections ? 2 * cout : cout, cout, 3, 3,
                        Conv2dOptions::square(1, 1), rng, kSlope);
  }
  head_ = Conv2d(c0, 1, 3, 3, Conv2dOptions::square(1, 1), rng, 1.0);
  if (cfg_.input_residual) {
    // Start close to the identity map.
    for (double& v : head_.weight.mutable_value().values()) v *= 0.1;
  }

  stem_.collect(params_, "encoder.stem");
  for (std::size_t i = 0; i < down_.size(); ++i) {
    down_[i].collect(params_, fmt::format("encoder.down{}", i));
    blocks_[i].collect(params_, fmt::format("encoder.block{}", i));
  }
  for (std::size_t i = 0; i < up_.size(); ++i) {
    up_[i].collect(params_, fmt::format("decoder.up{}", i));
    merge_[i].collect(params_, fmt::format("decoder.merge{}", i));
  }
  head_.collect(params_, "decoder.head");
}

Var Generator::forward(const Var& x) const {
  if (x.shape().size() != 4 || x.dim(1) != 1 || x.dim(2) != cfg_.height ||
      x.dim(3) != cfg_.width) {
    throw ShapeError(fmt::format("generator: expected [N,1,{},{}], got {}", cfg_.height,
                                 cfg_.width, to_string(x.shape())));
  }
  std::vector<Var> skips{act(stem_(x))};
  for (std::size_t i = 0; i < down_.size(); ++i)
    skips.push_back(blocks_[i](act(down_[i](skips.back()))));
  Var d = skips.back();
  for (std::size_t i = 0; i < up_.size(); ++i) {
    Var u = act(up_[i](d));
    const Var& skip = skips[skips.size() - 2 - i];
    if (cfg_.skip_connections) u = nn::concat({u, skip}, 1);
    d = act(merge_[i](u));
  }
  Var logits = head_(d);
  if (cfg_.input_residual) {
    Tensor base = x.value();
    for (double& v : base.values()) {
      const double p = std::clamp(v, 1e-3, 1.0 - 1e-3);
      v = std::log(p / (1.0 - p));
    }
    logits = nn::add(logits, Var(std::move(base)));
  }
  return nn::sigmoid(logits);
}

Image Generator::generate(const Image& hazy) const {
  if (hazy.width() != cfg_.width || hazy.height() != cfg_.height) {
    throw ShapeError(fmt::format("generate: expected {}x{} raster, got {}x{}", cfg_.width,
                                 cfg_.height, hazy.width(), hazy.height()));
  }
  nn::NoGradGuard guard;
  return tensor_to_image(forward(Var(image_to_tensor(hazy))).value());
}

std::size_t Generator::import_encoder_weights(const std::map<std::string, Tensor>& tensors) {
  std::size_t count = 0;
  for (const auto& e : params_.entries()) {
    if (!e.name.starts_with("encoder.")) continue;
    const auto it = tensors.find(e.name);
    if (it == tensors.end()) continue;
    if (it->second.shape() != e.var.shape()) {
      throw ShapeError(fmt::format("import: tensor '{}' expected {}, got {}", e.name,
                                   to_string(e.var.shape()), to_string(it->second.shape())));
    }
    Var target = e.var;
    target.mutable_value() = it->second;
    ++count;
  }
  return count;
}

Tensor image_to_tensor(const Image& img) {
  return Tensor({1, 1, img.height(), img.width()},
                std::vector<double>(img.pixels().begin(), img.pixels().end()));
}

Image tensor_to_image(const Tensor& t, std::size_t index) {
  const std::size_t h = t.dim(2), w = t.dim(3);
  const double* p = t.data() + index * t.dim(1) * h * w;
  return Image(w, h, std::vector<double>(p, p + h * w));
}

Tensor images_to_batch(const std::vector<const Image*>& images) {
  if (images.empty()) throw ShapeError("images_to_batch: empty batch");
  const std::size_t w = images.front()->width(), h = images.front()->height();
  Tensor t({images.size(), 1, h, w});
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i]->width() != w || images[i]->height() != h)
      throw ShapeError(fmt::format("images_to_batch: image {} is {}x{}, expected {}x{}", i,
                                   images[i]->width(), images[i]->height(), w, h));
    std::copy(images[i]->pixels().begin(), images[i]->pixels().end(), t.data() + i * h * w);
  }
  return t;
}

}  // namespace duvio
