#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "duvio/core/error.hpp"
#include "duvio/dataio/export.hpp"
#include "duvio/dataio/geometry.hpp"
#include "duvio/dataio/interpolate.hpp"
#include "duvio/dataio/sequence_io.hpp"
#include "duvio/dataio/split.hpp"
#include "duvio/dataio/split_impl.hpp"
#include "duvio/dataio/windows.hpp"
#include "duvio/disturb/synth.hpp"

using namespace duvio;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("duvio_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

SequenceDataset small_sequence(double duration = 1.0, std::uint64_t seed = 3) {
  SynthSpec s;
  s.sequence_id = "t01";
  s.duration = duration;
  s.width = 16;
  s.height = 8;
  s.trajectory.seed = seed;
  s.gyro_noise = 0.01;
  s.accel_noise = 0.05;
  s.seed = seed;
  return synthesize_sequence(s);
}

AbsolutePose pose_at(double t, Eigen::Vector3d p, Eigen::Quaterniond q = Eigen::Quaterniond::Identity()) {
  AbsolutePose a;
  a.timestamp = t;
  a.translation = p;
  a.rotation = q;
  return a;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST(Geometry, EulerRoundTrip) {
  const Eigen::Vector3d e(0.3, -0.4, 2.1);
  const Eigen::Matrix3d r = euler_xyz_to_matrix(e);
  EXPECT_TRUE(r.isApprox(Eigen::AngleAxisd(e.z(), Eigen::Vector3d::UnitZ()).toRotationMatrix() *
                         Eigen::AngleAxisd(e.y(), Eigen::Vector3d::UnitY()).toRotationMatrix() *
                         Eigen::AngleAxisd(e.x(), Eigen::Vector3d::UnitX()).toRotationMatrix(),
                         1e-12));
  EXPECT_TRUE(matrix_to_euler_xyz(r).isApprox(e, 1e-12));
}

TEST(Geometry, RelativePoseComposeInverse) {
  const AbsolutePose a = pose_at(0, {1, 2, 3}, Eigen::Quaterniond(Eigen::AngleAxisd(0.4, Eigen::Vector3d(1, 2, 0.5).normalized())));
  const AbsolutePose b = pose_at(1, {1.5, 1, 2}, Eigen::Quaterniond(Eigen::AngleAxisd(-0.7, Eigen::Vector3d(0, 1, 1).normalized())));
  const PoseDelta d = relative_pose(a, b);
  const AbsolutePose c = compose(a, d, 1.0);
  EXPECT_LT((c.translation - b.translation).norm(), 1e-12);
  EXPECT_LT(rotation_angle_between(c.rotation, b.rotation), 1e-9);
}

TEST(Geometry, IdenticalPosesGiveZeroDelta) {
  const AbsolutePose a = pose_at(0, {4, 5, 6}, Eigen::Quaterniond(0.5, 0.5, 0.5, 0.5));
  const PoseDelta d = relative_pose(a, a);
  EXPECT_LT(d.v.norm(), 1e-12);
  EXPECT_LT(d.phi.norm(), 1e-12);
}

TEST(Interpolate, ExactAtKnotsAndMidpointLerp) {
  std::vector<AbsolutePose> poses{pose_at(0, {0, 0, 0}), pose_at(1, {2, 0, 0})};
  const auto out = interpolate_reference(poses, std::vector<double>{0.0, 0.5, 1.0});
  EXPECT_EQ(out[0].translation, poses[0].translation);
  EXPECT_LT((out[1].translation - Eigen::Vector3d(1, 0, 0)).norm(), 1e-15);
  EXPECT_EQ(out[2].translation, poses[1].translation);
}

TEST(Interpolate, SlerpHalfwayIs45Degrees) {
  const Eigen::Quaterniond q90(Eigen::AngleAxisd(std::numbers::pi / 2, Eigen::Vector3d::UnitZ()));
  std::vector<AbsolutePose> poses{pose_at(0, {0, 0, 0}), pose_at(2, {0, 0, 0}, q90)};
  const AbsolutePose mid = interpolate_reference(poses, 1.0);
  const Eigen::Quaterniond q45(Eigen::AngleAxisd(std::numbers::pi / 4, Eigen::Vector3d::UnitZ()));
  EXPECT_LT(rotation_angle_between(mid.rotation, q45), 1e-12);
}

TEST(Interpolate, OutsideRangeIsRangeError) {
  std::vector<AbsolutePose> poses{pose_at(0, {0, 0, 0}), pose_at(1, {1, 0, 0})};
  EXPECT_THROW(interpolate_reference(poses, 1.01), RangeError);
  EXPECT_THROW(interpolate_reference(poses, -0.01), RangeError);
}

TEST(Interpolate, ContinuousUnderEpsilonSweep) {
  const Eigen::Quaterniond q(Eigen::AngleAxisd(1.0, Eigen::Vector3d(1, 1, 0).normalized()));
  std::vector<AbsolutePose> poses{pose_at(0, {0, 0, 0}), pose_at(1, {1, -2, 0.5}, q), pose_at(2, {3, 0, 0})};
  for (double t : {0.3, 0.999, 1.0, 1.4}) {
    const AbsolutePose base = interpolate_reference(poses, t);
    for (double eps : {1e-3, 1e-5, 1e-7}) {
      const AbsolutePose near = interpolate_reference(poses, std::min(t + eps, 2.0));
      EXPECT_LT((near.translation - base.translation).norm(), 5 * eps);
      EXPECT_LT(rotation_angle_between(near.rotation, base.rotation), 5 * eps);
    }
  }
}

TEST(Windows, CountAndImuLength) {
  const SequenceDataset ds = small_sequence();
  const auto w = build_windows(ds);
  ASSERT_EQ(w.size(), ds.frames.size() - 1);
  for (const auto& win : w) {
    EXPECT_EQ(win.imu.size(), 11u);
    EXPECT_DOUBLE_EQ(win.imu.front().timestamp, win.frame_a.timestamp);
    EXPECT_DOUBLE_EQ(win.imu.back().timestamp, win.frame_b.timestamp);
  }
}

TEST(Windows, ExactRateImuResamplesToIdentity) {
  // 20 Hz frames and 200 Hz IMU on the same clock: the grid lands on raw samples.
  SequenceDataset ds;
  ds.sequence_id = "exact";
  for (int i = 0; i < 4; ++i) ds.frames.push_back({i * 0.05, Image(4, 4, 0.5)});
  for (int k = 0; k <= 30; ++k) {
    ImuSample s;
    s.timestamp = k * 0.005;
    s.angular_velocity = Eigen::Vector3d(std::sin(k), k * 0.1, 1.0);
    s.linear_acceleration = Eigen::Vector3d(k, -k, std::cos(k));
    ds.imu_stream.push_back(s);
  }
  ds.reference_poses = {pose_at(0, {0, 0, 0}), pose_at(ds.frames.back().timestamp, {1, 0, 0})};
  const auto w = build_windows(ds);
  ASSERT_EQ(w.size(), 3u);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < 11; ++j) {
      const ImuSample& raw = ds.imu_stream[i * 10 + j];
      EXPECT_NEAR(w[i].imu[j].timestamp, raw.timestamp, 1e-12);
      EXPECT_LT((w[i].imu[j].angular_velocity - raw.angular_velocity).norm(), 1e-9);
      EXPECT_LT((w[i].imu[j].linear_acceleration - raw.linear_acceleration).norm(), 1e-9);
    }
}

TEST(Windows, StationaryPairGivesZeroTarget) {
  SequenceDataset ds;
  ds.sequence_id = "still";
  ds.frames = {{0.0, Image(4, 4)}, {0.05, Image(4, 4)}};
  for (int k = 0; k <= 10; ++k) ds.imu_stream.push_back({k * 0.005, {}, {}});
  ds.reference_poses = {pose_at(0, {1, 1, 1}), pose_at(0.05, {1, 1, 1})};
  const auto w = build_windows(ds);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].target.v, Eigen::Vector3d::Zero());
  EXPECT_EQ(w[0].target.phi, Eigen::Vector3d::Zero());
}

TEST(Windows, UncoveredIntervalIsCoverageError) {
  SequenceDataset ds = small_sequence();
  ds.imu_stream.resize(ds.imu_stream.size() / 2);
  EXPECT_THROW(build_windows(ds), CoverageError);
}

TEST(Windows, ResizesFrames) {
  const SequenceDataset ds = small_sequence();
  WindowOptions opts;
  opts.image_width = 8;
  opts.image_height = 4;
  const auto w = build_windows(ds, opts);
  EXPECT_EQ(w[0].frame_a.image.width(), 8u);
  EXPECT_EQ(w[0].frame_b.image.height(), 4u);
}

TEST(SequenceIo, SaveLoadRoundTripIsLossless) {
  const SequenceDataset ds = small_sequence();
  const fs::path dir = temp_dir("roundtrip");
  save_sequence(ds, dir / "a");
  const SequenceDataset back = load_sequence(dir / "a");
  ASSERT_EQ(back.frames.size(), ds.frames.size());
  ASSERT_EQ(back.imu_stream.size(), ds.imu_stream.size());
  ASSERT_EQ(back.reference_poses.size(), ds.reference_poses.size());
  EXPECT_EQ(back.frames, ds.frames);
  EXPECT_EQ(back.imu_stream, ds.imu_stream);
  for (std::size_t i = 0; i < ds.reference_poses.size(); ++i) {
    EXPECT_EQ(back.reference_poses[i].translation, ds.reference_poses[i].translation);
    EXPECT_EQ(back.reference_poses[i].rotation.coeffs(), ds.reference_poses[i].rotation.coeffs());
  }
  // load -> save -> load: bitwise-equal manifests
  save_sequence(back, dir / "b");
  EXPECT_EQ(read_lines(dir / "a" / "manifest"), read_lines(dir / "b" / "manifest"));
  EXPECT_EQ(manifest_text(back), manifest_text(load_sequence(dir / "b")));
}

TEST(SequenceIo, MissingFileNamesPath) {
  const SequenceDataset ds = small_sequence();
  const fs::path dir = temp_dir("missing");
  save_sequence(ds, dir);
  fs::remove(dir / "imu.csv");
  try {
    load_sequence(dir);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(e.path().find("imu.csv"), std::string::npos);
  }
}

TEST(SequenceIo, ImuRegressionCitesRow) {
  const SequenceDataset ds = small_sequence();
  const fs::path dir = temp_dir("regress");
  save_sequence(ds, dir);
  auto lines = read_lines(dir / "imu.csv");
  // data row 5 is line 6; give it the timestamp of data row 3
  const std::string t3 = lines[4].substr(0, lines[4].find(','));
  lines[6] = t3 + lines[6].substr(lines[6].find(','));
  std::ofstream out(dir / "imu.csv");
  for (const auto& l : lines) out << l << '\n';
  out.close();
  try {
    load_sequence(dir);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.index(), 5u);
  }
}

TEST(Split, PaperDefault) {
  const DatasetSplit s = split_dataset({"h01", "h02", "h03", "h04", "h05", "h06", "h07"});
  EXPECT_EQ(s.train, (std::vector<std::string>{"h02", "h04", "h06"}));
  EXPECT_EQ(s.val, (std::vector<std::string>{"h03", "h05"}));
  EXPECT_EQ(s.test, (std::vector<std::string>{"h01", "h07"}));
}

TEST(Split, UnknownIdIsError) {
  EXPECT_THROW(split_dataset({"h01", "h02"}), ConfigError);
}

TEST(Split, FractionRetainsPrefixByTime) {
  std::vector<int> items(300);
  for (int i = 0; i < 300; ++i) items[i] = i;
  EXPECT_EQ(retain_fraction(items, 1.0).size(), 300u);
  const auto third = retain_fraction(items, 1.0 / 3.0);
  ASSERT_EQ(third.size(), 100u);
  EXPECT_EQ(third.front(), 0);
  EXPECT_EQ(third.back(), 99);
  const auto strided = retain_fraction(items, 1.0 / 3.0, RetainMode::stride);
  ASSERT_EQ(strided.size(), 100u);
  EXPECT_EQ(strided[1], 3);
  EXPECT_THROW(retained_count(10, 0.0), ConfigError);
  EXPECT_THROW(retained_count(10, 1.5), ConfigError);
}

TEST(Export, DeltasCsvRoundTrip) {
  std::vector<PoseDelta> d(3);
  d[1].v = {0.1, -0.2, 1.0 / 3.0};
  d[2].phi = {1e-9, 2.5, -3.25};
  const fs::path p = temp_dir("deltas") / "d.csv";
  write_deltas_csv(p, d);
  EXPECT_EQ(read_deltas_csv(p), d);
}
