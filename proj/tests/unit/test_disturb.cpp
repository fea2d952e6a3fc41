#include <gtest/gtest.h>

#include <cmath>

#include "duvio/core/error.hpp"
#include "duvio/dataio/windows.hpp"
#include "duvio/disturb/disturb.hpp"
#include "duvio/disturb/synth.hpp"

using namespace duvio;

namespace {

Image ramp(std::size_t w, std::size_t h) {
  Image img(w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) img.at(x, y) = static_cast<double>(x + y) / static_cast<double>(w + h);
  return img;
}

SynthSpec tiny(TrajectoryKind kind) {
  SynthSpec s;
  s.duration = 2.0;
  s.width = 16;
  s.height = 8;
  s.trajectory.kind = kind;
  return s;
}

}  // namespace

TEST(Turbidity, ZeroBetaIsIdentity) {
  const Image img = ramp(9, 5);
  TurbidityParams p;
  p.attenuation_beta = 0.0;
  EXPECT_EQ(apply_turbidity(img, p), img);
}

TEST(Turbidity, HugeBetaIsAirlight) {
  TurbidityParams p;
  p.attenuation_beta = 1e6;
  p.airlight = 0.7;
  const Image out = apply_turbidity(ramp(9, 5), p);
  for (double v : out.pixels()) EXPECT_NEAR(v, 0.7, 1e-12);
}

TEST(Turbidity, ClosedFormPixel) {
  TurbidityParams p;
  p.attenuation_beta = 0.5;
  p.airlight = 0.8;
  p.depth.near = p.depth.far = 2.0;
  const Image out = apply_turbidity(Image(3, 3, 0.2), p);
  const double t = std::exp(-1.0);
  EXPECT_NEAR(out.at(1, 1), 0.8 * (1 - t) + 0.2 * t, 1e-12);
}

TEST(Turbidity, VerticalGradientDepth) {
  DepthProxy d;
  d.kind = DepthProxy::Kind::vertical_gradient;
  d.near = 1.0;
  d.far = 3.0;
  EXPECT_LT(d.at_row(0, 10), d.at_row(9, 10) + 1e-12);
  EXPECT_NE(d.at_row(0, 10), d.at_row(9, 10));
}

TEST(Distortion, ZeroParamsIsIdentity) {
  const Image img = ramp(12, 7);
  EXPECT_EQ(apply_distortion(img, {}), img);
}

TEST(Distortion, SameSeedSameOutput) {
  DistortionParams p;
  p.radial_k1 = 0.1;
  p.blur_sigma = 0.8;
  p.noise_sigma = 0.05;
  p.seed = 11;
  const Image img = ramp(20, 10);
  EXPECT_EQ(apply_distortion(img, p), apply_distortion(img, p));
  p.seed = 12;
  DistortionParams q = p;
  q.seed = 11;
  EXPECT_NE(apply_distortion(img, p), apply_distortion(img, q));
}

TEST(Distortion, NoiseStatistic) {
  DistortionParams p;
  p.noise_sigma = 0.1;
  p.seed = 5;
  const Image out = apply_distortion(Image(1000, 1000, 0.5), p);
  // flat 0.5 with sigma 0.1: clipping at 0/1 is a 5-sigma event, negligible.
  EXPECT_NEAR(stddev(out), 0.1, 0.002);
  EXPECT_NEAR(mean(out), 0.5, 0.001);
}

TEST(Distortion, ParametersClamped) {
  DistortionParams p;
  p.blur_sigma = -3;
  p.noise_sigma = -1;
  const DistortionParams c = p.clamped();
  EXPECT_GE(c.blur_sigma, 0.0);
  EXPECT_GE(c.noise_sigma, 0.0);
  TurbidityParams t;
  t.attenuation_beta = -1;
  t.airlight = 2;
  EXPECT_GE(t.clamped().attenuation_beta, 0.0);
  EXPECT_LE(t.clamped().airlight, 1.0);
}

TEST(Synth, StraightLineHasConstantTargets) {
  SynthSpec s = tiny(TrajectoryKind::line);
  const auto w = build_windows(synthesize_sequence(s));
  ASSERT_GT(w.size(), 2u);
  for (const auto& win : w) {
    EXPECT_LT((win.target.v - w.front().target.v).norm(), 1e-9);
    EXPECT_LT(win.target.phi.norm(), 1e-12);
  }
  EXPECT_NEAR(w.front().target.v.norm(), s.trajectory.speed / s.frame_rate, 1e-9);
}

TEST(Synth, CircleYawRateEqualsOmega) {
  SynthSpec s = tiny(TrajectoryKind::circle);
  const double omega = s.trajectory.speed / s.trajectory.radius;
  const SequenceDataset ds = synthesize_sequence(s);
  for (const auto& imu : ds.imu_stream) EXPECT_NEAR(imu.angular_velocity.z(), omega, 1e-9);
}

TEST(Synth, ScenarioTouchesImagesOnly) {
  SynthSpec a = tiny(TrajectoryKind::lissajous);
  a.gyro_noise = 0.02;
  a.seed = 9;
  SynthSpec b = a;
  b.scenario = Scenario::turbid;
  const SequenceDataset da = synthesize_sequence(a), db = synthesize_sequence(b);
  EXPECT_EQ(da.imu_stream, db.imu_stream);
  ASSERT_EQ(da.reference_poses.size(), db.reference_poses.size());
  for (std::size_t i = 0; i < da.reference_poses.size(); ++i)
    EXPECT_EQ(da.reference_poses[i].translation, db.reference_poses[i].translation);
  EXPECT_NE(da.frames[0].image, db.frames[0].image);
}

TEST(Synth, Deterministic) {
  SynthSpec s = tiny(TrajectoryKind::square);
  s.frame_jitter = 0.002;
  s.imu_jitter = 0.0005;
  s.accel_noise = 0.1;
  s.seed = 4;
  const SequenceDataset a = synthesize_sequence(s), b = synthesize_sequence(s);
  EXPECT_EQ(a.frames, b.frames);
  EXPECT_EQ(a.imu_stream, b.imu_stream);
}

TEST(Synth, ZeroDurationRejected) {
  SynthSpec s = tiny(TrajectoryKind::line);
  s.duration = 0.0;
  EXPECT_THROW(synthesize_sequence(s), ConfigError);
}

TEST(Synth, ImageTexturedAndInRange) {
  const SequenceDataset ds = synthesize_sequence(tiny(TrajectoryKind::lissajous));
  const Image& img = ds.frames.front().image;
  EXPECT_GT(stddev(img), 0.02);
  for (double v : img.pixels()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Synth, TrajectoryKindNames) {
  for (auto k : {TrajectoryKind::line, TrajectoryKind::circle, TrajectoryKind::square, TrajectoryKind::lissajous})
    EXPECT_EQ(parse_trajectory_kind(to_string(k)), k);
  EXPECT_THROW(parse_trajectory_kind("spiral"), ConfigError);
}
