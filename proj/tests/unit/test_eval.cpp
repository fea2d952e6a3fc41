#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <thread>

#include "duvio/core/error.hpp"
#include "duvio/dataio/geometry.hpp"
#include "duvio/eval/hardware.hpp"
#include "duvio/eval/report.hpp"
#include "duvio/eval/rmse.hpp"
#include "duvio/eval/trajectory.hpp"

using namespace duvio;
namespace fs = std::filesystem;

namespace {

std::vector<PoseDelta> random_deltas(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 0.1);
  std::vector<PoseDelta> out(n);
  for (auto& p : out) {
    p.v = {d(rng), d(rng), d(rng)};
    p.phi = {d(rng), d(rng), d(rng)};
  }
  return out;
}

}  // namespace

TEST(Rmse, ExactMatchIsZero) {
  std::mt19937_64 rng(1);
  const auto a = random_deltas(10, rng);
  const RmsePair r = compute_rmse(a, a);
  EXPECT_EQ(r.v_rmse, 0.0);
  EXPECT_EQ(r.phi_rmse, 0.0);
}

TEST(Rmse, ConstantTranslationError) {
  std::vector<PoseDelta> ref(5), pred(5);
  for (auto& p : pred) p.v = {3, 0, 0};
  const RmsePair r = compute_rmse(pred, ref);
  EXPECT_NEAR(r.v_rmse, std::sqrt(3.0), 1e-15);
  EXPECT_EQ(r.phi_rmse, 0.0);
  EXPECT_NEAR(compute_rmse(pred, ref, {RmseMode::norm, false}).v_rmse, 3.0, 1e-15);
}

TEST(Rmse, MatchesNaiveLoop) {
  std::mt19937_64 rng(2);
  const auto p = random_deltas(100, rng), t = random_deltas(100, rng);
  double sv = 0, sp = 0;
  for (std::size_t i = 0; i < 100; ++i)
    for (int k = 0; k < 3; ++k) {
      sv += (p[i].v[k] - t[i].v[k]) * (p[i].v[k] - t[i].v[k]);
      sp += (p[i].phi[k] - t[i].phi[k]) * (p[i].phi[k] - t[i].phi[k]);
    }
  const RmsePair r = compute_rmse(p, t);
  EXPECT_NEAR(r.v_rmse, std::sqrt(sv / 300), 1e-12);
  EXPECT_NEAR(r.phi_rmse, std::sqrt(sp / 300), 1e-12);
}

TEST(Rmse, GeodesicRotation) {
  std::vector<PoseDelta> ref(2), pred(2);
  pred[0].phi = {0, 0, 0.3};
  pred[1].phi = {0, 0, -0.1};
  const RmsePair r = compute_rmse(pred, ref, {RmseMode::pooled, true});
  EXPECT_NEAR(r.phi_rmse, std::sqrt((0.09 + 0.01) / 2), 1e-12);
}

TEST(Rmse, LengthMismatch) {
  EXPECT_THROW(compute_rmse(std::vector<PoseDelta>(3), std::vector<PoseDelta>(4)), ValidationError);
}

TEST(SplitThree, Sizes) {
  auto sizes = [](std::size_t n) {
    const auto parts = split_three(std::vector<int>(n));
    return std::array<std::size_t, 3>{parts[0].size(), parts[1].size(), parts[2].size()};
  };
  EXPECT_EQ(sizes(9), (std::array<std::size_t, 3>{3, 3, 3}));
  EXPECT_EQ(sizes(10), (std::array<std::size_t, 3>{4, 3, 3}));
  EXPECT_EQ(sizes(11), (std::array<std::size_t, 3>{4, 4, 3}));
  EXPECT_EQ(sizes(3), (std::array<std::size_t, 3>{1, 1, 1}));
  EXPECT_THROW(split_three(std::vector<int>(2)), ValidationError);
  const auto p = split_three(std::vector<int>{1, 2, 3, 4, 5, 6, 7});
  EXPECT_EQ(p[0], (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(p[2], (std::vector<int>{6, 7}));
}

TEST(Trajectory, ZeroDeltasStayAtStart) {
  AbsolutePose start;
  start.translation = {1, 2, 3};
  const auto traj = integrate_trajectory(start, std::vector<PoseDelta>(5));
  ASSERT_EQ(traj.size(), 6u);
  for (const auto& p : traj) {
    EXPECT_EQ(p.translation, start.translation);
    EXPECT_LT(rotation_angle_between(p.rotation, start.rotation), 1e-15);
  }
}

TEST(Trajectory, ClosedSquare) {
  PoseDelta d;
  d.v = {1, 0, 0};
  d.phi = {0, 0, std::numbers::pi / 2};
  const auto traj = integrate_trajectory({}, std::vector<PoseDelta>(4, d));
  EXPECT_LT(traj.back().translation.norm(), 1e-9);
  EXPECT_LT(rotation_angle_between(traj.back().rotation, Eigen::Quaterniond::Identity()), 1e-9);
  EXPECT_NEAR((traj[1].translation - Eigen::Vector3d(1, 0, 0)).norm(), 0.0, 1e-12);
}

TEST(Trajectory, Timestamps) {
  AbsolutePose start;
  start.timestamp = 2.0;
  const auto a = integrate_trajectory(start, std::vector<PoseDelta>(2));
  EXPECT_EQ(a[2].timestamp, 4.0);
  const auto b = integrate_trajectory(start, std::vector<PoseDelta>(2), {2.0, 2.05, 2.1});
  EXPECT_EQ(b[1].timestamp, 2.05);
}

TEST(Hardware, TimerSanity) {
  const HardwareMetrics m = capture_hardware_metrics([] { std::this_thread::sleep_for(std::chrono::milliseconds(100)); });
  EXPECT_GE(m.inference_time, 0.1);
  EXPECT_LE(m.inference_time, 0.2);
}

TEST(Hardware, NoProbeMeansUnavailable) {
  const HardwareMetrics m = capture_hardware_metrics([] {});
  EXPECT_FALSE(m.power_w || m.gpu_util_percent || m.memory_mib || m.temperature_c);
  const auto j = to_json(m);
  for (const char* k : {"power_w", "gpu_util_percent", "memory_mib", "temperature_c"})
    EXPECT_EQ(j.at(k), "unavailable") << k;
}

TEST(Hardware, StubEchoedExactly) {
  StubProbe probe(47.41, 4.0, 923.0, 34.0);
  const HardwareMetrics m = capture_hardware_metrics([] {}, &probe);
  EXPECT_EQ(*m.power_w, 47.41);
  EXPECT_EQ(*m.gpu_util_percent, 4.0);
  EXPECT_EQ(*m.memory_mib, 923.0);
  EXPECT_EQ(*m.temperature_c, 34.0);
  const HardwareMetrics back = hardware_metrics_from_json(nlohmann::json::parse(to_json(m).dump()));
  EXPECT_EQ(*back.power_w, 47.41);
  EXPECT_EQ(back.probe, "stub");
}

TEST(Hardware, CommandProbe) {
  CommandProbe probe({{"power", "echo 12.5"}, {"util", "echo garbage"}, {"memory", "false"}});
  EXPECT_EQ(probe.power_w(), 12.5);
  EXPECT_FALSE(probe.util_percent());
  EXPECT_FALSE(probe.memory_mib());
  EXPECT_FALSE(probe.temperature_c());
  EXPECT_EQ(parse_single_number(" 7 \n"), 7.0);
  EXPECT_FALSE(parse_single_number("1 2"));
}

TEST(Hardware, WorkloadFailurePropagatesWithElapsed) {
  try {
    capture_hardware_metrics([] {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      throw std::runtime_error("boom");
    });
    FAIL();
  } catch (const WorkloadError& e) {
    EXPECT_GE(e.elapsed(), 0.02);
    try {
      std::rethrow_if_nested(e);
      FAIL();
    } catch (const std::runtime_error& inner) {
      EXPECT_STREQ(inner.what(), "boom");
    }
  }
}

TEST(Report, ScoreSequenceSplitsIntoThirds) {
  std::mt19937_64 rng(3);
  const auto p = random_deltas(10, rng), t = random_deltas(10, rng);
  const auto reps = score_sequence("h01", Scenario::turbid, true, p, t);
  ASSERT_EQ(reps.size(), 3u);
  EXPECT_EQ(reps[0].sub_sequence_index, 1u);
  EXPECT_EQ(reps[2].sub_sequence_index, 3u);
  const auto parts_p = split_three(p), parts_t = split_three(t);
  EXPECT_EQ(reps[1].v_rmse, compute_rmse(parts_p[1], parts_t[1]).v_rmse);
  EXPECT_TRUE(reps[0].dehazed);
}

TEST(Report, RenderAndReparse) {
  RmseReport r{"h07", Scenario::distortion, 2, 0.01, 0.02, 0.017, 0.035, false};
  const fs::path dir = fs::temp_directory_path() / "duvio_test_report";
  fs::remove_all(dir);
  const auto out = render_reports({r}, reference_baselines(), dir, dir / "charts");
  EXPECT_EQ(out.charts.size(), 1u);
  EXPECT_TRUE(fs::exists(out.charts[0]));
  std::ifstream in(out.json);
  const auto back = reports_from_json(nlohmann::json::parse(in));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], r);
  EXPECT_THROW(render_reports({}, {}, dir), ValidationError);
}

TEST(Report, BaselinesFixed) {
  const auto& b = reference_baselines();
  ASSERT_EQ(b.size(), 4u);
  EXPECT_EQ(b[1].method, "ORB-SLAM3");
  EXPECT_DOUBLE_EQ(b[1].h01, 0.0198);
  EXPECT_DOUBLE_EQ(b[3].h07, 0.0188);
}
