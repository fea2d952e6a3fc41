#include "duvio/vionet/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/dataio/windows.hpp"
#include "duvio/nn/optim.hpp"
#include "duvio/vionet/loss.hpp"

namespace duvio {

using nn::Var;

namespace {

// A contiguous run of windows from one sequence.
struct Clip {
  const SampleWindow* first;
  std::size_t length;
};

std::vector<Clip> make_clips(const std::vector<WindowSequence>& sequences, std::size_t max_len) {
  std::vector<Clip> clips;
  for (const auto& seq : sequences)
    for (std::size_t start = 0; start < seq.size(); start += max_len)
      clips.push_back({seq.data() + start, std::min(max_len, seq.size() - start)});
  return clips;
}

// Groups same-length clips into batches of at most `batch`.
std::vector<std::vector<Clip>> make_batches(std::vector<Clip> clips, std::size_t batch,
                                            std::mt19937_64* rng) {
  std::map<std::size_t, std::vector<Clip>> by_length;
  for (const auto& c : clips) by_length[c.length].push_back(c);
  std::vector<std::vector<Clip>> batches;
  for (auto& [len, group] : by_length) {
    if (rng) std::shuffle(group.begin(), group.end(), *rng);
    for (std::size_t s = 0; s < group.size(); s += batch)
      batches.emplace_back(group.begin() + static_cast<long>(s),
                           group.begin() + static_cast<long>(std::min(group.size(), s + batch)));
  }
  if (rng) std::shuffle(batches.begin(), batches.end(), *rng);
  return batches;
}

struct BatchTensors {
  Var frames;  // [T*B,2,H,W], or dehazer-sized rasters for joint training
  Var imu;     // [T*B,6,11]
  Tensor targets;
  std::size_t steps = 0;
};

BatchTensors assemble(const std::vector<Clip>& batch) {
  const std::size_t b = batch.size(), steps = batch.front().length;
  const Image& probe = batch.front().first->frame_a.image;
  const std::size_t h = probe.height(), w = probe.width(), fsz = 2 * h * w, isz = 6 * kImuWindow;
  Tensor frames({steps * b, 2, h, w});
  Tensor imu({steps * b, 6, kImuWindow});
  Tensor targets({steps * b, 6});
  std::vector<PoseDelta> deltas;
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t j = 0; j < b; ++j) {
      const SampleWindow& win = batch[j].first[t];
      const std::size_t row = t * b + j;
      const Tensor f = frame_pair_tensor(win.frame_a.image, win.frame_b.image);
      const Tensor m = imu_window_tensor(win.imu);
      std::copy(f.data(), f.data() + fsz, frames.data() + row * fsz);
      std::copy(m.data(), m.data() + isz, imu.data() + row * isz);
      deltas.push_back(win.target);
    }
  return {Var(std::move(frames)), Var(std::move(imu)), deltas_to_tensor(deltas), steps};
}

// Joint mode: dehaze both frames in-graph and resample to the network size.
Var dehaze_in_graph(const Var& frames, const Generator& gen, const VioConfig& cfg) {
  const std::size_t m = frames.dim(0), h = frames.dim(2), w = frames.dim(3);
  const Var a = nn::reshape(nn::narrow(frames, 1, 0, 1), {m, 1, h, w});
  const Var b = nn::reshape(nn::narrow(frames, 1, 1, 1), {m, 1, h, w});
  Var out = gen.forward(nn::concat({a, b}, 0));
  if (h != cfg.image_height || w != cfg.image_width)
    out = nn::resize_bilinear(out, cfg.image_height, cfg.image_width);
  return nn::concat({nn::narrow(out, 0, 0, m), nn::narrow(out, 0, m, m)}, 1);
}

Var batch_loss(const VioNet& net, const BatchTensors& bt, const Generator* joint) {
  const Var frames = joint ? dehaze_in_graph(bt.frames, *joint, net.config()) : bt.frames;
  return pose_loss(net.forward_clips(frames, bt.imu, bt.steps), bt.targets, net.config().alpha);
}

double clip_loss(const VioNet& net, const std::vector<Clip>& clips, const Generator* joint) {
  if (clips.empty()) return std::numeric_limits<double>::quiet_NaN();
  nn::NoGradGuard guard;
  double acc = 0.0;
  std::size_t steps = 0;
  for (const auto& batch : make_batches(clips, net.config().batch, nullptr)) {
    const BatchTensors bt = assemble(batch);
    const std::size_t rows = bt.targets.dim(0);
    acc += batch_loss(net, bt, joint).item() * static_cast<double>(rows);
    steps += rows;
  }
  return acc / static_cast<double>(steps);
}

}  // namespace

nlohmann::json to_json(const VioTrainResult& result) {
  auto epochs = nlohmann::json::array();
  for (const auto& e : result.log) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"val_loss", std::isnan(e.val_loss) ? nlohmann::json() : nlohmann::json(e.val_loss)}});
  }
  return {{"initial_train_loss", result.initial_train_loss},
          {"final_train_loss", result.final_train_loss},
          {"epochs", epochs}};
}

std::vector<WindowSequence> prepare_windows(const std::vector<SequenceDataset>& sequences,
                                            const VioConfig& cfg, const Generator* dehazer) {
  const bool joint = dehazer && cfg.joint_dehaze_finetune;
  WindowOptions opts;
  opts.image_width = joint ? dehazer->config().width : cfg.image_width;
  opts.image_height = joint ? dehazer->config().height : cfg.image_height;
  std::vector<WindowSequence> out;
  for (const auto& seq : sequences) {
    out.push_back(dehazer && !joint ? build_windows(dehaze_sequence(seq, *dehazer), opts)
                                    : build_windows(seq, opts));
  }
  return out;
}

double evaluate_vio(const VioNet& net, const std::vector<WindowSequence>& sequences) {
  std::vector<Clip> clips;
  for (const auto& seq : sequences)
    if (!seq.empty()) clips.push_back({seq.data(), seq.size()});
  return clip_loss(net, clips, nullptr);
}

VioTrainResult train_vio(const std::vector<WindowSequence>& train,
                         const std::vector<WindowSequence>& val, const VioConfig& cfg,
                         Generator* dehazer, const VioProgress& progress) {
  cfg.validate();
  const std::size_t clip_len = cfg.seq_len - 1;
  const auto train_clips = make_clips(train, clip_len);
  if (train_clips.empty()) throw ValidationError("train_vio: no training windows", 0);
  const auto val_clips = make_clips(val, clip_len);
  const Generator* joint = cfg.joint_dehaze_finetune ? dehazer : nullptr;

  VioTrainResult result{VioNet(cfg), 0.0, 0.0, {}};
  VioNet& net = result.net;
  std::vector<Var> params = net.params().trainable();
  if (joint)
    for (const Var& p : dehazer->params().trainable()) params.push_back(p);
  nn::Adam opt(params, {cfg.lr, cfg.beta1, cfg.beta2, 1e-8});
  std::mt19937_64 rng(cfg.seed ^ 0xC11F5ULL);

  result.initial_train_loss = clip_loss(net, train_clips, joint);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double acc = 0.0;
    std::size_t rows = 0;
    for (const auto& batch : make_batches(train_clips, cfg.batch, &rng)) {
      const BatchTensors bt = assemble(batch);
      opt.zero_grad();
      const Var loss = batch_loss(net, bt, joint);
      loss.backward();
      opt.step();
      acc += loss.item() * static_cast<double>(bt.targets.dim(0));
      rows += bt.targets.dim(0);
    }
    VioEpochLog log{epoch, acc / static_cast<double>(rows), clip_loss(net, val_clips, joint)};
    result.log.push_back(log);
    if (progress) progress(log);
  }
  result.final_train_loss = clip_loss(net, train_clips, joint);
  return result;
}

}  // namespace duvio
