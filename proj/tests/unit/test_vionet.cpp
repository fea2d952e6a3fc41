#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "duvio/core/error.hpp"
#include "duvio/disturb/synth.hpp"
#include "duvio/nn/ops.hpp"
#include "duvio/vionet/loss.hpp"
#include "duvio/vionet/model.hpp"
#include "duvio/vionet/train.hpp"
#include "testing.hpp"

using namespace duvio;
using nn::Var;

namespace {

VioConfig tiny_config() {
  VioConfig c;
  c.image_width = 32;
  c.image_height = 16;
  c.conv_base = 4;
  c.visual_feature = 8;
  c.inertial_channels = 8;
  c.inertial_feature = 8;
  c.lstm_layers = 2;
  c.lstm_hidden = 16;
  c.mlp_hidden = 16;
  c.seq_len = 5;
  c.batch = 2;
  c.epochs = 2;
  c.lr = 1e-3;
  return c;
}

SequenceDataset tiny_sequence(std::uint64_t seed = 2, double duration = 1.0) {
  SynthSpec s;
  s.duration = duration;
  s.width = 32;
  s.height = 16;
  s.seed = seed;
  s.trajectory.seed = seed;
  return synthesize_sequence(s);
}

void zero_biases(nn::ParamSet& set) {
  for (const auto& e : set.entries()) {
    const std::string& n = e.name;
    if (n.size() >= 5 && n.compare(n.size() - 5, 5, ".bias") == 0) {
      Var v = e.var;
      v.mutable_value().fill(0.0);
    }
  }
}

PoseDelta delta(Eigen::Vector3d v, Eigen::Vector3d phi) { return {v, phi}; }

}  // namespace

TEST(PoseLoss, Examples) {
  const std::vector<PoseDelta> t{delta({0.1, 0.2, 0.3}, {0.01, 0.02, 0.03})};
  EXPECT_EQ(pose_loss(t, t, 100.0), 0.0);
  auto p = t;
  p[0].v.x() += 1.0;
  EXPECT_NEAR(pose_loss(p, t, 100.0), 1.0, 1e-12);
  EXPECT_NEAR(pose_loss(p, t, 3.0), 1.0, 1e-12);
  p = t;
  p[0].phi.y() += 1.0;
  EXPECT_NEAR(pose_loss(p, t, 100.0), 100.0, 1e-10);
  EXPECT_NEAR(pose_loss(p, t, 50.0), 50.0, 1e-10);
}

TEST(PoseLoss, PermutationInvariantAndTensorAgrees) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  std::vector<PoseDelta> p(7), t(7);
  for (std::size_t i = 0; i < 7; ++i) {
    p[i] = delta({n(rng), n(rng), n(rng)}, {n(rng), n(rng), n(rng)});
    t[i] = delta({n(rng), n(rng), n(rng)}, {n(rng), n(rng), n(rng)});
  }
  const double base = pose_loss(p, t, 100.0);
  auto pp = p, tt = t;
  std::reverse(pp.begin(), pp.end());
  std::reverse(tt.begin(), tt.end());
  EXPECT_NEAR(pose_loss(pp, tt, 100.0), base, 1e-9);
  const Var pv(deltas_to_tensor(p), false);
  EXPECT_NEAR(pose_loss(pv, deltas_to_tensor(t), 100.0).item(), base, 1e-9);
  EXPECT_EQ(tensor_to_deltas(deltas_to_tensor(p)), p);
}

TEST(PoseLoss, Errors) {
  std::vector<PoseDelta> a(2), b(3);
  EXPECT_THROW(pose_loss(a, b, 1.0), ValidationError);
  EXPECT_THROW(pose_loss(a, a, -1.0), RangeError);
}

TEST(VioConfig, DefaultsMatchPublishedSetup) {
  const VioConfig c;
  EXPECT_EQ(c.batch, 16u);
  EXPECT_DOUBLE_EQ(c.lr, 1e-6);
  EXPECT_EQ(c.epochs, 20u);
  EXPECT_EQ(c.visual_feature, 512u);
  EXPECT_EQ(c.fused_size(), 768u);
  EXPECT_EQ(c.lstm_hidden, 1024u);
  EXPECT_NO_THROW(c.validate());
}

TEST(VioConfig, ProblemsAggregated) {
  VioConfig c = tiny_config();
  c.lstm_layers = 0;
  c.alpha = -1;
  EXPECT_GE(c.problems().size(), 2u);
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(VioConfig, JsonRoundTrip) {
  const VioConfig c = tiny_config();
  const VioConfig back = vio_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  std::vector<std::string> problems;
  vio_config_from_json({{"lstm_hiden", 4}}, &problems);
  ASSERT_EQ(problems.size(), 1u);
}

TEST(Encoders, OutputSizes) {
  const VioNet net(tiny_config());
  std::mt19937_64 rng(1);
  const Var frames(test_util::random_tensor({3, 2, 16, 32}, rng), false);
  const Var imu(test_util::random_tensor({3, 6, 11}, rng), false);
  EXPECT_EQ(net.visual()(frames).shape(), (Shape{3, 8}));
  EXPECT_EQ(net.inertial().feature_map(imu).shape(), (Shape{3, 8, 11}));
  EXPECT_EQ(net.inertial()(imu).shape(), (Shape{3, 8}));
  EXPECT_EQ(net.encode(frames, imu).shape(), (Shape{3, 16}));
  EXPECT_THROW(net.visual()(Var(Tensor({1, 2, 8, 8}), false)), ShapeError);
  EXPECT_THROW(net.inertial()(Var(Tensor({1, 6, 10}), false)), ShapeError);
}

TEST(Encoders, ZeroInputPropagatesBias) {
  VioNet net(tiny_config());
  zero_biases(net.params());
  const Var zf(Tensor({1, 2, 16, 32}), false);
  const Var zi(Tensor({1, 6, 11}), false);
  const Var fv = net.visual()(zf), fi = net.inertial().feature_map(zi);
  for (double v : fv.value().values()) EXPECT_EQ(v, 0.0);
  for (double v : fi.value().values()) EXPECT_EQ(v, 0.0);
}

TEST(Encoders, OrderAndSampleSensitivity) {
  const VioNet net(tiny_config());
  const SequenceDataset ds = tiny_sequence();
  const Image &a = ds.frames[0].image, &b = ds.frames[5].image;
  const Var ab(frame_pair_tensor(a, b), false), ba(frame_pair_tensor(b, a), false);
  const Var fab = net.visual()(ab), fba = net.visual()(ba);
  EXPECT_NE(fab.value()[0], fba.value()[0]);

  std::array<ImuSample, kImuWindow> w{};
  const Var x1(imu_window_tensor(w), false);
  w[4].angular_velocity.x() = 0.5;
  const Var x2(imu_window_tensor(w), false);
  const Tensor f1 = net.inertial()(x1).value(), f2 = net.inertial()(x2).value();
  bool differs = false;
  for (std::size_t i = 0; i < f1.size(); ++i) differs |= f1[i] != f2[i];
  EXPECT_TRUE(differs);
}

TEST(Fusion, ConcatHeadAndTail) {
  std::mt19937_64 rng(2);
  const Var xv(test_util::random_tensor({2, 5}, rng), false);
  const Var xi(Tensor({2, 3}), false);
  const Var z = fuse_features(xv, xi);
  ASSERT_EQ(z.shape(), (Shape{2, 8}));
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(z.value()[r * 8 + j], xv.value()[r * 5 + j]);
    for (std::size_t j = 5; j < 8; ++j) EXPECT_EQ(z.value()[r * 8 + j], 0.0);
  }
  const Var head = nn::narrow(z, 1, 0, 5);
  for (std::size_t i = 0; i < head.value().size(); ++i) EXPECT_EQ(head.value()[i], xv.value()[i]);
}

TEST(Temporal, StepMatchesRollout) {
  const VioNet net(tiny_config());
  const TemporalModel& tm = net.temporal();
  std::mt19937_64 rng(4);
  std::vector<Var> z;
  for (int t = 0; t < 6; ++t) z.push_back(Var(test_util::random_tensor({2, 16}, rng), false));
  RecurrentState rs = tm.zero_state(2);
  const auto rolled = tm.rollout(z, rs);
  RecurrentState ss = tm.zero_state(2);
  for (std::size_t t = 0; t < z.size(); ++t) {
    auto [y, next] = tm.step(z[t], ss);
    ss = next;
    for (std::size_t i = 0; i < y.value().size(); ++i) EXPECT_NEAR(y.value()[i], rolled[t].value()[i], 1e-6);
  }
}

TEST(Temporal, ZeroEverythingGivesMlpBias) {
  VioNet net(tiny_config());
  for (const auto& e : net.params().entries()) {
    if (e.name.rfind("temporal.", 0) != 0) continue;
    Var v = e.var;
    v.mutable_value().fill(e.name == "temporal.fc2.bias" ? 0.25 : 0.0);
  }
  auto [y, state] = net.temporal().step(Var(Tensor({1, 16}), false), net.temporal().zero_state(1));
  for (double v : y.value().values()) EXPECT_EQ(v, 0.25);
}

TEST(Temporal, StateShapeChecked) {
  const VioNet net(tiny_config());
  RecurrentState bad = net.temporal().zero_state(3);
  EXPECT_THROW(net.temporal().step(Var(Tensor({2, 16}), false), bad), ShapeError);
}

TEST(VioNet, WholeNetworkGradients) {
  VioNet net(tiny_config());
  const auto windows = prepare_windows({tiny_sequence(3, 0.25)}, net.config());
  ASSERT_GE(windows[0].size(), 4u);
  std::vector<Tensor> frames, imu;
  std::vector<PoseDelta> targets;
  for (std::size_t i = 0; i < 4; ++i) {
    frames.push_back(frame_pair_tensor(windows[0][i].frame_a.image, windows[0][i].frame_b.image));
    imu.push_back(imu_window_tensor(windows[0][i].imu));
    targets.push_back(windows[0][i].target);
  }
  auto stack = [](const std::vector<Tensor>& parts) {
    std::vector<Var> vs;
    for (const auto& t : parts) vs.push_back(Var(t, false));
    return nn::concat(vs, 0);
  };
  const Var f = stack(frames), m = stack(imu);
  const Tensor tgt = deltas_to_tensor(targets);
  const auto stats = test_util::grad_check([&] { return pose_loss(net.forward_clips(f, m, 4), tgt, 100.0); },
                                         net.params().trainable(), 4, 1e-3);
  EXPECT_GE(stats.pass_rate(), 0.95) << stats.passed << "/" << stats.checked << " worst " << stats.worst;
}

TEST(VioNet, SaveLoadAndInferDeterministic) {
  const VioNet net(tiny_config());
  const auto path = std::filesystem::temp_directory_path() / "duvio_test_vio.bin";
  save_vio(path, net);
  const VioNet back = load_vio(path);
  const SequenceDataset ds = tiny_sequence();
  const auto a = infer_sequence(ds, net), b = infer_sequence(ds, back);
  EXPECT_EQ(a.size(), ds.frames.size() - 1);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, infer_sequence(ds, net));
}

TEST(VioNet, InferenceCounts) {
  const VioNet net(tiny_config());
  SequenceDataset ds = tiny_sequence();
  ds.frames.resize(2);
  EXPECT_EQ(infer_sequence(ds, net).size(), 1u);
  ds.frames.resize(1);
  EXPECT_THROW(infer_sequence(ds, net), ValidationError);
}

TEST(VioTrain, EmptyTrainSetRejected) {
  EXPECT_THROW(train_vio({}, {}, tiny_config()), ValidationError);
}

TEST(VioTrain, ReproducibleLossCurves) {
  const auto windows = prepare_windows({tiny_sequence(5, 0.6)}, tiny_config());
  const auto a = train_vio(windows, windows, tiny_config());
  const auto b = train_vio(windows, windows, tiny_config());
  ASSERT_EQ(a.log.size(), 2u);
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log[i].train_loss, b.log[i].train_loss);
    EXPECT_EQ(a.log[i].val_loss, b.log[i].val_loss);
  }
}
