#include "duvio/vionet/config.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "duvio/core/error.hpp"

namespace duvio {

namespace {

std::size_t conv_out(std::size_t in, std::size_t k, std::size_t stride) {
  const std::size_t pad = k / 2;
  return (in + 2 * pad - k) / stride + 1;
}

}  // namespace

std::vector<std::string> VioConfig::problems() const {
  std::vector<std::string> out;
  auto positive = [&](std::size_t v, const char* name) {
    if (v == 0) out.push_back(fmt::format("vio.{} must be > 0", name));
  };
  positive(image_width, "image_width");
  positive(image_height, "image_height");
  positive(visual_feature, "visual_feature");
  positive(inertial_channels, "inertial_channels");
  positive(inertial_feature, "inertial_feature");
  positive(conv_base, "conv_base");
  positive(lstm_layers, "lstm_layers");
  positive(lstm_hidden, "lstm_hidden");
  positive(mlp_hidden, "mlp_hidden");
  positive(batch, "batch");
  positive(epochs, "epochs");
  if (imu_window != 11) out.push_back(fmt::format("vio.imu_window must be 11 (got {})", imu_window));
  if (inertial_channels % 2 != 0) out.push_back("vio.inertial_channels must be even");
  if (seq_len < 2) out.push_back("vio.seq_len must be >= 2");
  if (!(alpha >= 0.0)) out.push_back("vio.alpha must be >= 0");
  if (!(lr > 0.0)) out.push_back("vio.lr must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) out.push_back("vio.beta1 must be in [0,1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) out.push_back("vio.beta2 must be in [0,1)");
  if (!(leaky_slope >= 0.0)) out.push_back("vio.leaky_slope must be >= 0");
  return out;
}

void VioConfig::validate() const {
  if (auto p = problems(); !p.empty()) throw ConfigError(std::move(p));
}

std::vector<std::size_t> VioConfig::visual_channels() const {
  std::vector<std::size_t> out;
  for (std::size_t w : kVisualWidths) out.push_back(std::max<std::size_t>(1, w * conv_base / 64));
  return out;
}

std::array<std::size_t, 2> VioConfig::visual_map_size() const {
  std::size_t h = image_height, w = image_width;
  for (std::size_t i = 0; i < kVisualKernels.size(); ++i) {
    h = conv_out(h, kVisualKernels[i], kVisualStrides[i]);
    w = conv_out(w, kVisualKernels[i], kVisualStrides[i]);
  }
  return {h, w};
}

std::size_t VioConfig::inertial_output() const {
  return inertial_projection ? inertial_feature : inertial_channels * imu_window;
}

std::size_t VioConfig::fused_size() const { return visual_feature + inertial_output(); }

nlohmann::json to_json(const VioConfig& c) {
  return {{"image_width", c.image_width},
          {"image_height", c.image_height},
          {"imu_window", c.imu_window},
          {"visual_feature", c.visual_feature},
          {"inertial_channels", c.inertial_channels},
          {"inertial_projection", c.inertial_projection},
          {"inertial_feature", c.inertial_feature},
          {"conv_base", c.conv_base},
          {"lstm_layers", c.lstm_layers},
          {"lstm_hidden", c.lstm_hidden},
          {"mlp_hidden", c.mlp_hidden},
          {"alpha", c.alpha},
          {"lr", c.lr},
          {"batch", c.batch},
          {"epochs", c.epochs},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"leaky_slope", c.leaky_slope},
          {"seq_len", c.seq_len},
          {"visual_enabled", c.visual_enabled},
          {"inertial_enabled", c.inertial_enabled},
          {"joint_dehaze_finetune", c.joint_dehaze_finetune},
          {"seed", c.seed}};
}

VioConfig vio_config_from_json(const nlohmann::json& j, std::vector<std::string>* problems) {
  VioConfig c;
  const nlohmann::json defaults = to_json(c);
  std::vector<std::string> local;
  std::vector<std::string>& issues = problems ? *problems : local;
  if (!j.is_object()) {
    issues.push_back("vio: expected a mapping");
  } else {
    for (const auto& [key, value] : j.items()) {
      if (!defaults.contains(key)) issues.push_back(fmt::format("vio: unknown key '{}'", key));
    }
    auto get = [&](const char* key, auto& field) {
      if (!j.contains(key)) return;
      try {
        field = j.at(key).get<std::decay_t<decltype(field)>>();
      } catch (const nlohmann::json::exception&) {
        issues.push_back(fmt::format("vio.{}: wrong type", key));
      }
    };
    get("image_width", c.image_width);
    get("image_height", c.image_height);
    get("imu_window", c.imu_window);
    get("visual_feature", c.visual_feature);
    get("inertial_channels", c.inertial_channels);
    get("inertial_projection", c.inertial_projection);
    get("inertial_feature", c.inertial_feature);
    get("conv_base", c.conv_base);
    get("lstm_layers", c.lstm_layers);
    get("lstm_hidden", c.lstm_hidden);
    get("mlp_hidden", c.mlp_hidden);
    get("alpha", c.alpha);
    get("lr", c.lr);
    get("batch", c.batch);
    get("epochs", c.epochs);
    get("beta1", c.beta1);
    get("beta2", c.beta2);
    get("leaky_slope", c.leaky_slope);
    get("seq_len", c.seq_len);
    get("visual_enabled", c.visual_enabled);
    get("inertial_enabled", c.inertial_enabled);
    get("joint_dehaze_finetune", c.joint_dehaze_finetune);
    get("seed", c.seed);
  }
  for (auto& p : c.problems()) issues.push_back(std::move(p));
  if (!problems && !issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

}  // namespace duvio
