#include "duvio/vionet/model.hpp"

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/dataio/windows.hpp"
#include "duvio/nn/weights_file.hpp"
#include "duvio/vionet/loss.hpp"

namespace duvio {

using nn::Var;

namespace {

constexpr const char* kKind = "vio";
constexpr std::size_t kEncodeChunk = 16;

}  // namespace

VioNet::VioNet(VioConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  nn::Rng rng(cfg_.seed);
  visual_ = VisualEncoder(cfg_, rng);
  inertial_ = InertialEncoder(cfg_, rng);
  temporal_ = TemporalModel(cfg_, rng);
  visual_.collect(params_, "visual");
  inertial_.collect(params_, "inertial");
  temporal_.collect(params_, "temporal");
}

Var VioNet::encode(const Var& frames, const Var& imu) const {
  const std::size_t n = frames.dim(0);
  if (imu.dim(0) != n) {
    throw ShapeError(fmt::format("encode: {} frame pairs vs {} IMU windows", n, imu.dim(0)));
  }
  const Var xv = cfg_.visual_enabled ? visual_(frames) : Var(Tensor({n, cfg_.visual_feature}));
  const Var xi = cfg_.inertial_enabled ? inertial_(imu) : Var(Tensor({n, cfg_.inertial_output()}));
  return fuse_features(xv, xi);
}

Var VioNet::forward_clips(const Var& frames, const Var& imu, std::size_t steps) const {
  const std::size_t total = frames.dim(0);
  if (steps == 0 || total % steps != 0) {
    throw ShapeError(fmt::format("forward_clips: {} windows do not split into {} steps", total, steps));
  }
  const std::size_t batch = total / steps;
  const Var z = encode(frames, imu);
  std::vector<Var> per_step;
  for (std::size_t t = 0; t < steps; ++t) per_step.push_back(nn::narrow(z, 0, t * batch, batch));
  RecurrentState state = temporal_.zero_state(batch);
  return nn::concat(temporal_.rollout(per_step, state), 0);
}

void save_vio(const std::filesystem::path& path, const VioNet& net) {
  nn::write_weights(path, {{"kind", kKind}, {"config", to_json(net.config())}}, net.params());
}

VioNet load_vio(const std::filesystem::path& path) {
  const nn::WeightsFile file = nn::read_weights(path);
  if (file.meta.value("kind", "") != kKind) throw LoadError(path.string(), "not a VIO weights file");
  try {
    VioNet net(vio_config_from_json(file.meta.at("config")));
    net.params().assign(file.tensors);
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path.string(), fmt::format("malformed VIO header ({})", e.what()));
  }
}

SequenceDataset dehaze_sequence(const SequenceDataset& dataset, const Generator& dehazer) {
  SequenceDataset out = dataset;
  const std::size_t gw = dehazer.config().width, gh = dehazer.config().height;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(out.frames.size()); ++ii) {
    Image& img = out.frames[static_cast<std::size_t>(ii)].image;
    const std::size_t w = img.width(), h = img.height();
    if (w == gw && h == gh) {
      img = dehazer.generate(img);
    } else {
      img = resize_bilinear(dehazer.generate(resize_bilinear(img, gw, gh)), w, h);
    }
  }
  return out;
}

std::vector<PoseDelta> infer_sequence(const SequenceDataset& dataset, const VioNet& net,
                                      const Generator* dehazer) {
  if (dataset.frames.size() < 2) {
    throw ValidationError(fmt::format("infer_sequence: sequence {} has {} frame(s), need >= 2",
                                      dataset.sequence_id, dataset.frames.size()),
                          dataset.frames.size());
  }
  const VioConfig& cfg = net.config();
  const SequenceDataset source = dehazer ? dehaze_sequence(dataset, *dehazer) : dataset;
  WindowOptions opts;
  opts.image_width = cfg.image_width;
  opts.image_height = cfg.image_height;
  opts.with_targets = false;
  const auto windows = build_windows(source, opts);

  nn::NoGradGuard guard;
  std::vector<Var> z;
  for (std::size_t start = 0; start < windows.size(); start += kEncodeChunk) {
    const std::size_t end = std::min(windows.size(), start + kEncodeChunk);
    const std::size_t n = end - start;
    Tensor frames({n, 2, cfg.image_height, cfg.image_width});
    Tensor imu({n, 6, kImuWindow});
    const std::size_t fsz = 2 * cfg.image_height * cfg.image_width, isz = 6 * kImuWindow;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& w = windows[start + i];
      const Tensor f = frame_pair_tensor(w.frame_a.image, w.frame_b.image);
      const Tensor m = imu_window_tensor(w.imu);
      std::copy(f.data(), f.data() + fsz, frames.data() + i * fsz);
      std::copy(m.data(), m.data() + isz, imu.data() + i * isz);
    }
    const Var chunk = net.encode(Var(std::move(frames)), Var(std::move(imu)));
    for (std::size_t i = 0; i < n; ++i) z.push_back(nn::narrow(chunk, 0, i, 1));
  }
  RecurrentState state = net.temporal().zero_state(1);
  const auto outputs = net.temporal().rollout(z, state);
  return tensor_to_deltas(nn::concat(outputs, 0).value());
}

}  // namespace duvio
