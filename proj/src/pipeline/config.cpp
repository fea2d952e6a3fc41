#include "duvio/pipeline/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "duvio/core/error.hpp"

namespace duvio {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(DehazeMode m) {
  switch (m) {
    case DehazeMode::on: return "on";
    case DehazeMode::off: return "off";
    case DehazeMode::both: return "both";
  }
  return "on";
}

namespace {

json scalar_to_json(const YAML::Node& node) {
  const std::string& s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted
  if (s.empty() || s == "~" || s == "null") return nullptr;
  {
    long long v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) return v;
  }
  {
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) return v;
  }
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  if (lower == "true" || lower == "yes" || lower == "on") return true;
  if (lower == "false" || lower == "no" || lower == "off") return false;
  return s;
}

json node_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: return nullptr;
    case YAML::NodeType::Scalar: return scalar_to_json(node);
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(node_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = node_to_json(kv.second);
      return obj;
    }
  }
  return nullptr;
}

// Typed field access that records every problem instead of stopping.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

  // Returns the object at `key` (or null when absent) after checking its keys.
  const json* section(const json& parent, const std::string& path, const std::string& key,
                      const std::set<std::string>& allowed) {
    if (!parent.is_object() || !parent.contains(key) || parent.at(key).is_null()) return nullptr;
    const json& obj = parent.at(key);
    const std::string full = join(path, key);
    if (!obj.is_object()) {
      issues_.push_back(fmt::format("{}: expected a mapping", full));
      return nullptr;
    }
    check_keys(obj, full, allowed);
    return &obj;
  }

  void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : obj.items())
      if (!allowed.contains(k)) issues_.push_back(fmt::format("{}: unknown key", join(path, k)));
  }

  template <typename T>
  void get(const json* obj, const std::string& path, const std::string& key, T& field) {
    if (!obj || !obj->contains(key) || obj->at(key).is_null()) return;
    const json& v = obj->at(key);
    const std::string full = join(path, key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) return bad(full, "a boolean");
      field = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) return bad(full, "an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.get<long long>() < 0 && !v.is_number_unsigned()) return bad(full, "a non-negative integer");
      }
      field = v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) return bad(full, "a number");
      field = v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) return bad(full, "a string");
      field = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, fs::path>) {
      if (!v.is_string()) return bad(full, "a path string");
      field = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      if (!v.is_array()) return bad(full, "a list of strings");
      std::vector<std::string> out;
      for (const auto& item : v) {
        if (!item.is_string()) return bad(full, "a list of strings");
        out.push_back(item.get<std::string>());
      }
      field = std::move(out);
    }
  }

  template <typename T>
  void get_optional(const json* obj, const std::string& path, const std::string& key,
                    std::optional<T>& field) {
    if (!obj || !obj->contains(key) || obj->at(key).is_null()) return;
    T value{};
    const std::size_t before = issues_.size();
    get(obj, path, key, value);
    if (issues_.size() == before) field = value;
  }

  void add(std::string issue) { issues_.push_back(std::move(issue)); }

  // Runs a parser that may throw ConfigError and folds its issues in.
  template <typename F>
  void attempt(F&& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      for (const auto& i : e.issues()) issues_.push_back(i);
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  void bad(const std::string& full, const char* what) {
    issues_.push_back(fmt::format("{}: expected {}", full, what));
  }

  std::vector<std::string>& issues_;
};

void read_vio(const json& root, VioConfig& vio, std::vector<std::string>& issues) {
  if (!root.contains("vio") || root.at("vio").is_null()) return;
  std::vector<std::string> local;
  json section = root.at("vio");
  if (section.is_object()) section.erase("seed");
  vio = vio_config_from_json(section, &local);
  for (auto& p : local) issues.push_back(std::move(p));
}

}  // namespace

json yaml_to_json(const std::string& yaml_text) {
  try {
    return node_to_json(YAML::Load(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError({fmt::format("yaml: {}", e.what())});
  }
}

void apply_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.dehaze.generator.seed = seed + 11;
  cfg.dehaze.discriminator.seed = seed + 12;
  cfg.dehaze.train.seed = seed + 13;
  cfg.vio.seed = seed + 17;
  cfg.distortion.seed = seed + 19;
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  const json root = yaml_to_json(yaml_text);
  ExperimentConfig cfg;
  std::vector<std::string> issues;
  Reader rd(issues);
  if (!root.is_null() && !root.is_object()) throw ConfigError({"config: top level must be a mapping"});
  const json empty = json::object();
  const json& top = root.is_object() ? root : empty;

  rd.check_keys(top, "", {"dataset_root", "output_dir", "seed", "determinism", "scenario",
                          "scenarios", "split", "data_fraction", "fraction_mode", "dehaze",
                          "dehaze_cfg", "vio", "synthetic", "disturb", "eval", "hardware"});
  rd.get(&top, "", "dataset_root", cfg.dataset_root);
  rd.get(&top, "", "output_dir", cfg.output_dir);
  rd.get(&top, "", "seed", cfg.seed);
  rd.get(&top, "", "determinism", cfg.determinism);

  std::vector<std::string> scenario_names;
  if (top.contains("scenario") && top.contains("scenarios"))
    rd.add("scenario and scenarios are mutually exclusive");
  if (top.contains("scenario")) {
    std::string one;
    rd.get(&top, "", "scenario", one);
    if (!one.empty()) scenario_names = {one};
  }
  rd.get(&top, "", "scenarios", scenario_names);
  if (!scenario_names.empty()) {
    cfg.scenarios.clear();
    for (const auto& name : scenario_names) {
      rd.attempt([&] {
        const Scenario s = parse_scenario(name);
        if (std::find(cfg.scenarios.begin(), cfg.scenarios.end(), s) == cfg.scenarios.end())
          cfg.scenarios.push_back(s);
      });
    }
  }

  if (const json* split = rd.section(top, "", "split", {"train", "val", "test"})) {
    rd.get(split, "split", "train", cfg.split.train);
    rd.get(split, "split", "val", cfg.split.val);
    rd.get(split, "split", "test", cfg.split.test);
  }
  if (cfg.split.train.empty()) rd.add("split.train must list at least one sequence");
  if (cfg.split.test.empty()) rd.add("split.test must list at least one sequence");

  rd.get(&top, "", "data_fraction", cfg.data_fraction);
  if (!(cfg.data_fraction > 0.0 && cfg.data_fraction <= 1.0))
    rd.add(fmt::format("data_fraction must be in (0,1] (got {})", cfg.data_fraction));
  std::string mode = "prefix";
  rd.get(&top, "", "fraction_mode", mode);
  if (mode == "prefix") cfg.fraction_mode = RetainMode::prefix;
  else if (mode == "stride") cfg.fraction_mode = RetainMode::stride;
  else rd.add(fmt::format("fraction_mode '{}' is not one of: prefix, stride", mode));

  // dehaze: on/off/both plus optional weights
  if (top.contains("dehaze") && top.at("dehaze").is_boolean()) {
    cfg.dehaze.mode = top.at("dehaze").get<bool>() ? DehazeMode::on : DehazeMode::off;
  } else if (const json* dz = rd.section(top, "", "dehaze", {"mode", "weights", "max_pairs"})) {
    if (dz->contains("mode") && dz->at("mode").is_boolean()) {
      cfg.dehaze.mode = dz->at("mode").get<bool>() ? DehazeMode::on : DehazeMode::off;
    } else {
      std::string m = "on";
      rd.get(dz, "dehaze", "mode", m);
      if (m == "on") cfg.dehaze.mode = DehazeMode::on;
      else if (m == "off") cfg.dehaze.mode = DehazeMode::off;
      else if (m == "both") cfg.dehaze.mode = DehazeMode::both;
      else rd.add(fmt::format("dehaze.mode '{}' is not one of: on, off, both", m));
    }
    rd.get(dz, "dehaze", "weights", cfg.dehaze.weights);
    rd.get(dz, "dehaze", "max_pairs", cfg.dehaze.max_pairs);
  }

  bool gen_size_set = false;
  if (const json* dc = rd.section(top, "", "dehaze_cfg", {"generator", "discriminator", "train"})) {
    if (const json* g = rd.section(*dc, "dehaze_cfg", "generator",
                                   {"backbone", "base_channels", "depth", "skip_connections",
                                    "input_residual", "width", "height"})) {
      const std::string p = "dehaze_cfg.generator";
      std::string backbone(to_string(cfg.dehaze.generator.backbone));
      rd.get(g, p, "backbone", backbone);
      rd.attempt([&] { cfg.dehaze.generator.backbone = parse_backbone(backbone); });
      rd.get(g, p, "base_channels", cfg.dehaze.generator.base_channels);
      rd.get(g, p, "depth", cfg.dehaze.generator.depth);
      rd.get(g, p, "skip_connections", cfg.dehaze.generator.skip_connections);
      rd.get(g, p, "input_residual", cfg.dehaze.generator.input_residual);
      rd.get(g, p, "width", cfg.dehaze.generator.width);
      rd.get(g, p, "height", cfg.dehaze.generator.height);
      gen_size_set = g->contains("width") || g->contains("height");
    }
    if (const json* d = rd.section(*dc, "dehaze_cfg", "discriminator",
                                   {"layers", "base_channels", "batch_norm", "slope", "patch_output"})) {
      const std::string p = "dehaze_cfg.discriminator";
      rd.get(d, p, "layers", cfg.dehaze.discriminator.layers);
      rd.get(d, p, "base_channels", cfg.dehaze.discriminator.base_channels);
      rd.get(d, p, "batch_norm", cfg.dehaze.discriminator.batch_norm);
      rd.get(d, p, "slope", cfg.dehaze.discriminator.slope);
      rd.get(d, p, "patch_output", cfg.dehaze.discriminator.patch_output);
    }
    if (const json* t = rd.section(*dc, "dehaze_cfg", "train",
                                   {"epochs", "data_fraction", "batch", "lr", "beta1", "beta2",
                                    "lambda_l1", "adversarial"})) {
      const std::string p = "dehaze_cfg.train";
      auto& tr = cfg.dehaze.train;
      rd.get(t, p, "epochs", tr.epochs);
      rd.get(t, p, "data_fraction", tr.data_fraction);
      rd.get(t, p, "batch", tr.batch);
      rd.get(t, p, "lr", tr.lr);
      rd.get(t, p, "beta1", tr.beta1);
      rd.get(t, p, "beta2", tr.beta2);
      rd.get(t, p, "lambda_l1", tr.lambda_l1);
      rd.get(t, p, "adversarial", tr.adversarial);
    }
  }

  read_vio(top, cfg.vio, issues);

  if (const json* sy = rd.section(top, "", "synthetic",
                                  {"enabled", "sequences", "duration", "frame_rate", "imu_rate",
                                   "width", "height", "altitude", "gyro_noise", "accel_noise",
                                   "gyro_bias", "accel_bias", "frame_jitter", "imu_jitter",
                                   "reference_stride"})) {
    auto& s = cfg.synthetic;
    const std::string p = "synthetic";
    s.enabled = true;
    rd.get(sy, p, "enabled", s.enabled);
    rd.get(sy, p, "duration", s.duration);
    rd.get(sy, p, "frame_rate", s.frame_rate);
    rd.get(sy, p, "imu_rate", s.imu_rate);
    rd.get(sy, p, "width", s.width);
    rd.get(sy, p, "height", s.height);
    rd.get(sy, p, "altitude", s.altitude);
    rd.get(sy, p, "gyro_noise", s.gyro_noise);
    rd.get(sy, p, "accel_noise", s.accel_noise);
    rd.get(sy, p, "gyro_bias", s.gyro_bias);
    rd.get(sy, p, "accel_bias", s.accel_bias);
    rd.get(sy, p, "frame_jitter", s.frame_jitter);
    rd.get(sy, p, "imu_jitter", s.imu_jitter);
    rd.get(sy, p, "reference_stride", s.reference_stride);
    if (sy->contains("sequences")) {
      const json& list = sy->at("sequences");
      if (!list.is_array()) {
        rd.add("synthetic.sequences: expected a list");
      } else {
        for (std::size_t i = 0; i < list.size(); ++i) {
          const std::string ip = fmt::format("synthetic.sequences[{}]", i);
          if (list[i].is_string()) {
            s.sequences.push_back({list[i].get<std::string>(), TrajectoryKind::lissajous, 0.5});
            continue;
          }
          if (!list[i].is_object()) {
            rd.add(ip + ": expected an id or a mapping");
            continue;
          }
          rd.check_keys(list[i], ip, {"id", "trajectory", "speed"});
          SyntheticSequence seq;
          std::string kind = "lissajous";
          rd.get(&list[i], ip, "id", seq.id);
          rd.get(&list[i], ip, "trajectory", kind);
          rd.get(&list[i], ip, "speed", seq.speed);
          rd.attempt([&] { seq.trajectory = parse_trajectory_kind(kind); });
          if (seq.id.empty()) rd.add(ip + ".id is required");
          s.sequences.push_back(seq);
        }
      }
    }
    if (s.enabled) {
      if (s.sequences.empty()) {
        // Defaults to the split's ids.
        for (const auto* ids : {&cfg.split.train, &cfg.split.val, &cfg.split.test})
          for (const auto& id : *ids) s.sequences.push_back({id, TrajectoryKind::lissajous, 0.5});
      }
      if (!(s.duration > 0.0)) rd.add("synthetic.duration must be > 0");
      if (!(s.frame_rate > 0.0) || !(s.imu_rate > 0.0)) rd.add("synthetic rates must be > 0");
      if (s.width == 0 || s.height == 0) rd.add("synthetic.width/height must be > 0");
      if (s.reference_stride == 0) rd.add("synthetic.reference_stride must be >= 1");
    }
  }
  if (cfg.synthetic.enabled && !gen_size_set) {
    cfg.dehaze.generator.width = cfg.synthetic.width;
    cfg.dehaze.generator.height = cfg.synthetic.height;
  }

  if (const json* dist = rd.section(top, "", "disturb", {"turbidity", "distortion"})) {
    if (const json* t = rd.section(*dist, "disturb", "turbidity",
                                   {"attenuation_beta", "airlight", "depth"})) {
      const std::string p = "disturb.turbidity";
      rd.get(t, p, "attenuation_beta", cfg.turbidity.attenuation_beta);
      rd.get(t, p, "airlight", cfg.turbidity.airlight);
      if (const json* d = rd.section(*t, p, "depth", {"kind", "near", "far"})) {
        std::string kind = "constant";
        rd.get(d, p + ".depth", "kind", kind);
        if (kind == "constant") cfg.turbidity.depth.kind = DepthProxy::Kind::constant;
        else if (kind == "vertical_gradient") cfg.turbidity.depth.kind = DepthProxy::Kind::vertical_gradient;
        else rd.add(fmt::format("{}.depth.kind '{}' is not one of: constant, vertical_gradient", p, kind));
        rd.get(d, p + ".depth", "near", cfg.turbidity.depth.near);
        rd.get(d, p + ".depth", "far", cfg.turbidity.depth.far);
      }
      if (cfg.turbidity.attenuation_beta < 0.0) rd.add(p + ".attenuation_beta must be >= 0");
      if (cfg.turbidity.airlight < 0.0 || cfg.turbidity.airlight > 1.0)
        rd.add(p + ".airlight must be in [0,1]");
    }
    if (const json* d = rd.section(*dist, "disturb", "distortion",
                                   {"radial_k1", "radial_k2", "blur_sigma", "noise_sigma"})) {
      const std::string p = "disturb.distortion";
      rd.get(d, p, "radial_k1", cfg.distortion.radial_k1);
      rd.get(d, p, "radial_k2", cfg.distortion.radial_k2);
      rd.get(d, p, "blur_sigma", cfg.distortion.blur_sigma);
      rd.get(d, p, "noise_sigma", cfg.distortion.noise_sigma);
      if (cfg.distortion.blur_sigma < 0.0 || cfg.distortion.noise_sigma < 0.0)
        rd.add(p + ": sigmas must be >= 0");
    }
  }

  if (const json* ev = rd.section(top, "", "eval", {"rmse_mode", "geodesic_rotation"})) {
    std::string m = "pooled";
    rd.get(ev, "eval", "rmse_mode", m);
    if (m == "pooled") cfg.rmse.mode = RmseMode::pooled;
    else if (m == "norm") cfg.rmse.mode = RmseMode::norm;
    else rd.add(fmt::format("eval.rmse_mode '{}' is not one of: pooled, norm", m));
    rd.get(ev, "eval", "geodesic_rotation", cfg.rmse.geodesic_rotation);
  }

  if (const json* hw = rd.section(top, "", "hardware", {"probe", "stub", "commands"})) {
    rd.get(hw, "hardware", "probe", cfg.hardware.probe);
    if (cfg.hardware.probe != "none" && cfg.hardware.probe != "stub" && cfg.hardware.probe != "command")
      rd.add(fmt::format("hardware.probe '{}' is not one of: none, stub, command", cfg.hardware.probe));
    if (const json* st = rd.section(*hw, "hardware", "stub", {"power", "util", "memory", "temperature"})) {
      rd.get_optional(st, "hardware.stub", "power", cfg.hardware.stub_power);
      rd.get_optional(st, "hardware.stub", "util", cfg.hardware.stub_util);
      rd.get_optional(st, "hardware.stub", "memory", cfg.hardware.stub_memory);
      rd.get_optional(st, "hardware.stub", "temperature", cfg.hardware.stub_temperature);
    }
    if (const json* cm = rd.section(*hw, "hardware", "commands", {"power", "util", "memory", "temperature"})) {
      for (const auto& [k, v] : cm->items()) {
        if (v.is_string()) cfg.hardware.commands[k] = v.get<std::string>();
        else rd.add(fmt::format("hardware.commands.{}: expected a string", k));
      }
    }
  }

  apply_seed(cfg, cfg.seed);

  for (auto& p : cfg.dehaze.generator.problems()) issues.push_back("dehaze_cfg." + p);
  for (auto& p : cfg.dehaze.discriminator.problems()) issues.push_back("dehaze_cfg." + p);
  for (auto& p : cfg.dehaze.train.problems()) issues.push_back(p);

  // Referenced paths.
  if (!cfg.dataset_root.empty() && !cfg.synthetic.enabled) {
    if (!fs::is_directory(cfg.dataset_root)) {
      issues.push_back(fmt::format("dataset_root does not exist: {}", cfg.dataset_root.string()));
    } else {
      for (const auto* ids : {&cfg.split.train, &cfg.split.val, &cfg.split.test})
        for (const auto& id : *ids)
          if (!fs::is_directory(cfg.dataset_root / id))
            issues.push_back(fmt::format("dataset '{}' not found under {}", id, cfg.dataset_root.string()));
    }
  }
  if (!cfg.dehaze.weights.empty() && !fs::is_regular_file(cfg.dehaze.weights))
    issues.push_back(fmt::format("dehaze.weights does not exist: {}", cfg.dehaze.weights.string()));

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

ExperimentConfig validate_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), "cannot read config");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json to_json(const ExperimentConfig& cfg) {
  json scenarios = json::array();
  for (Scenario s : cfg.scenarios) scenarios.push_back(std::string(to_string(s)));
  json synthetic_seqs = json::array();
  for (const auto& s : cfg.synthetic.sequences)
    synthetic_seqs.push_back({{"id", s.id}, {"trajectory", std::string(to_string(s.trajectory))}, {"speed", s.speed}});
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {
      {"dataset_root", cfg.dataset_root.string()},
      {"output_dir", cfg.output_dir.string()},
      {"seed", cfg.seed},
      {"determinism", cfg.determinism},
      {"scenarios", scenarios},
      {"split", {{"train", cfg.split.train}, {"val", cfg.split.val}, {"test", cfg.split.test}}},
      {"data_fraction", cfg.data_fraction},
      {"fraction_mode", cfg.fraction_mode == RetainMode::prefix ? "prefix" : "stride"},
      {"dehaze",
       {{"mode", std::string(to_string(cfg.dehaze.mode))},
        {"weights", cfg.dehaze.weights.string()},
        {"max_pairs", cfg.dehaze.max_pairs}}},
      {"dehaze_cfg",
       {{"generator", to_json(cfg.dehaze.generator)},
        {"discriminator", to_json(cfg.dehaze.discriminator)},
        {"train", to_json(cfg.dehaze.train)}}},
      {"vio", to_json(cfg.vio)},
      {"synthetic",
       {{"enabled", cfg.synthetic.enabled},
        {"sequences", synthetic_seqs},
        {"duration", cfg.synthetic.duration},
        {"frame_rate", cfg.synthetic.frame_rate},
        {"imu_rate", cfg.synthetic.imu_rate},
        {"width", cfg.synthetic.width},
        {"height", cfg.synthetic.height},
        {"altitude", cfg.synthetic.altitude},
        {"gyro_noise", cfg.synthetic.gyro_noise},
        {"accel_noise", cfg.synthetic.accel_noise},
        {"gyro_bias", cfg.synthetic.gyro_bias},
        {"accel_bias", cfg.synthetic.accel_bias},
        {"frame_jitter", cfg.synthetic.frame_jitter},
        {"imu_jitter", cfg.synthetic.imu_jitter},
        {"reference_stride", cfg.synthetic.reference_stride}}},
      {"disturb",
       {{"turbidity",
         {{"attenuation_beta", cfg.turbidity.attenuation_beta},
          {"airlight", cfg.turbidity.airlight},
          {"depth",
           {{"kind", cfg.turbidity.depth.kind == DepthProxy::Kind::constant ? "constant" : "vertical_gradient"},
            {"near", cfg.turbidity.depth.near},
            {"far", cfg.turbidity.depth.far}}}}},
        {"distortion",
         {{"radial_k1", cfg.distortion.radial_k1},
          {"radial_k2", cfg.distortion.radial_k2},
          {"blur_sigma", cfg.distortion.blur_sigma},
          {"noise_sigma", cfg.distortion.noise_sigma},
          {"seed", cfg.distortion.seed}}}}},
      {"eval",
       {{"rmse_mode", cfg.rmse.mode == RmseMode::pooled ? "pooled" : "norm"},
        {"geodesic_rotation", cfg.rmse.geodesic_rotation}}},
      {"hardware",
       {{"probe", cfg.hardware.probe},
        {"stub",
         {{"power", opt(cfg.hardware.stub_power)},
          {"util", opt(cfg.hardware.stub_util)},
          {"memory", opt(cfg.hardware.stub_memory)},
          {"temperature", opt(cfg.hardware.stub_temperature)}}},
        {"commands", cfg.hardware.commands}}},
  };
}

}  // namespace duvio
