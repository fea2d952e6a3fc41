#include "duvio/dataio/sequence_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "duvio/core/error.hpp"
#include "duvio/core/png_io.hpp"

namespace fs = std::filesystem;

namespace duvio {

namespace {

constexpr const char* kPoseConvention =
    "T_world_body; target = inverse(T_a) * T_b in frame a; euler XYZ fixed axes, R = Rz*Ry*Rx";

std::string frame_name(std::size_t index) { return fmt::format("{:06d}.png", index); }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), "missing file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError(path.string(), "cannot write file");
  out << text;
}

// Rows of a CSV with a header; every row must have `columns` numeric fields.
std::vector<std::vector<double>> read_csv(const fs::path& path, std::size_t columns) {
  const std::string text = read_text(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.filename().string() + ": missing header", 0);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      while (p < comma && *p == ' ') ++p;
      const auto res = std::from_chars(p, comma, v);
      if (res.ec != std::errc()) {
        throw ValidationError(
            fmt::format("{}: malformed number at row {}", path.filename().string(), rows.size()),
            rows.size());
      }
      row.push_back(v);
      p = comma + 1;
    }
    if (row.size() != columns) {
      throw ValidationError(fmt::format("{}: row {} has {} fields, expected {}",
                                        path.filename().string(), rows.size(), row.size(), columns),
                            rows.size());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
void check_increasing(const std::vector<T>& items, const char* file) {
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (!(items[i].timestamp > items[i - 1].timestamp)) {
      throw ValidationError(fmt::format("{}: timestamp not increasing at row {}", file, i), i);
    }
  }
}

template <typename T>
void check_rate(const std::vector<T>& items, double rate_hz, double tolerance, const char* file) {
  if (items.size() < 2 || rate_hz <= 0) return;
  std::vector<double> dt;
  for (std::size_t i = 1; i < items.size(); ++i) dt.push_back(items[i].timestamp - items[i - 1].timestamp);
  std::nth_element(dt.begin(), dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2), dt.end());
  const double median = dt[dt.size() / 2];
  const double expected = 1.0 / rate_hz;
  if (std::abs(median - expected) > tolerance * expected) {
    throw ValidationError(fmt::format("{}: median interval {} s does not match declared rate {} Hz",
                                      file, median, rate_hz),
                          0);
  }
}

struct Manifest {
  SequenceDataset skeleton;
  std::size_t frame_count = 0;
  std::size_t imu_count = 0;
  std::size_t reference_count = 0;
  std::size_t width = 0;
  std::size_t height = 0;
};

Manifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest";
  const std::string text = read_text(path);
  YAML::Node node;
  try {
    node = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw LoadError(path.string(), std::string("malformed manifest (") + e.what() + ")");
  }
  Manifest m;
  try {
    if (node["format"].as<std::string>() != "duvio-sequence") {
      throw LoadError(path.string(), "unknown manifest format");
    }
    m.skeleton.sequence_id = node["sequence_id"].as<std::string>();
    m.skeleton.scenario = parse_scenario(node["scenario"].as<std::string>());
    m.skeleton.meta.frame_rate_hz = node["frame_rate_hz"].as<double>();
    m.skeleton.meta.imu_rate_hz = node["imu_rate_hz"].as<double>();
    m.skeleton.meta.rate_tolerance = node["rate_tolerance"].as<double>();
    m.skeleton.meta.time_epoch = node["time_epoch"].as<std::string>();
    m.frame_count = node["frame_count"].as<std::size_t>();
    m.imu_count = node["imu_count"].as<std::size_t>();
    m.reference_count = node["reference_count"].as<std::size_t>();
    m.width = node["image_width"].as<std::size_t>();
    m.height = node["image_height"].as<std::size_t>();
  } catch (const YAML::Exception& e) {
    throw LoadError(path.string(), std::string("incomplete manifest (") + e.what() + ")");
  }
  return m;
}

SequenceDataset load_impl(const fs::path& dir, bool with_images) {
  Manifest m = read_manifest(dir);
  SequenceDataset ds = std::move(m.skeleton);

  const auto times = read_csv(dir / "frame_times.csv", 2);
  if (times.size() != m.frame_count) {
    throw ValidationError(fmt::format("frame_times.csv: {} rows, manifest declares {}",
                                      times.size(), m.frame_count),
                          std::min(times.size(), m.frame_count));
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (static_cast<std::size_t>(times[i][0]) != i) {
      throw ValidationError(fmt::format("frame_times.csv: index mismatch at row {}", i), i);
    }
    Frame f;
    f.timestamp = times[i][1];
    if (with_images) {
      const fs::path png = dir / "frames" / frame_name(i);
      if (!fs::exists(png)) throw LoadError(png.string(), "missing file");
      f.image = read_png_gray(png);
      if (f.image.width() != m.width || f.image.height() != m.height) {
        throw ValidationError(fmt::format("frame {} is {}x{}, manifest declares {}x{}", i,
                                          f.image.width(), f.image.height(), m.width, m.height),
                              i);
      }
    }
    ds.frames.push_back(std::move(f));
  }

  for (const auto& r : read_csv(dir / "imu.csv", 7)) {
    ImuSample s;
    s.timestamp = r[0];
    s.angular_velocity = {r[1], r[2], r[3]};
    s.linear_acceleration = {r[4], r[5], r[6]};
    ds.imu_stream.push_back(s);
  }
  if (ds.imu_stream.size() != m.imu_count) {
    throw ValidationError(fmt::format("imu.csv: {} rows, manifest declares {}",
                                      ds.imu_stream.size(), m.imu_count),
                          std::min(ds.imu_stream.size(), m.imu_count));
  }

  for (const auto& r : read_csv(dir / "gt.csv", 8)) {
    AbsolutePose p;
    p.timestamp = r[0];
    p.translation = {r[1], r[2], r[3]};
    p.rotation = Eigen::Quaterniond(r[4], r[5], r[6], r[7]);
    ds.reference_poses.push_back(p);
  }
  if (ds.reference_poses.size() != m.reference_count) {
    throw ValidationError(fmt::format("gt.csv: {} rows, manifest declares {}",
                                      ds.reference_poses.size(), m.reference_count),
                          std::min(ds.reference_poses.size(), m.reference_count));
  }
  validate_sequence(ds);
  return ds;
}

}  // namespace

void validate_sequence(const SequenceDataset& ds) {
  if (ds.frames.empty()) throw ValidationError("sequence has no frames", 0);
  check_increasing(ds.frames, "frame_times.csv");
  check_increasing(ds.imu_stream, "imu.csv");
  check_increasing(ds.reference_poses, "gt.csv");
  for (std::size_t i = 0; i < ds.imu_stream.size(); ++i) {
    const auto& s = ds.imu_stream[i];
    if (!std::isfinite(s.timestamp) || !s.angular_velocity.allFinite() ||
        !s.linear_acceleration.allFinite()) {
      throw ValidationError(fmt::format("imu.csv: non-finite value at row {}", i), i);
    }
  }
  for (std::size_t i = 0; i < ds.reference_poses.size(); ++i) {
    const auto& p = ds.reference_poses[i];
    if (!p.translation.allFinite() || !p.rotation.coeffs().allFinite()) {
      throw ValidationError(fmt::format("gt.csv: non-finite value at row {}", i), i);
    }
    if (std::abs(p.rotation.norm() - 1.0) > 1e-6) {
      throw ValidationError(fmt::format("gt.csv: quaternion not unit at row {}", i), i);
    }
  }
  const Image* first = nullptr;
  for (std::size_t i = 0; i < ds.frames.size(); ++i) {
    const Image& img = ds.frames[i].image;
    if (img.empty()) continue;
    if (first && !img.same_shape(*first)) {
      throw ValidationError(fmt::format("frame {} size differs from frame 0", i), i);
    }
    first = first ? first : &img;
    for (double v : img.pixels()) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError(fmt::format("frame {} has intensity outside [0,1]", i), i);
      }
    }
  }
  check_rate(ds.frames, ds.meta.frame_rate_hz, ds.meta.rate_tolerance, "frame_times.csv");
  check_rate(ds.imu_stream, ds.meta.imu_rate_hz, ds.meta.rate_tolerance, "imu.csv");
}

SequenceDataset load_sequence(const fs::path& dir) { return load_impl(dir, true); }

SequenceDataset load_sequence_metadata(const fs::path& dir) { return load_impl(dir, false); }

std::string manifest_text(const SequenceDataset& ds) {
  const std::size_t w = ds.frames.empty() ? 0 : ds.frames.front().image.width();
  const std::size_t h = ds.frames.empty() ? 0 : ds.frames.front().image.height();
  std::string out;
  out += "format: duvio-sequence\n";
  out += "version: 1\n";
  out += fmt::format("sequence_id: \"{}\"\n", ds.sequence_id);
  out += fmt::format("scenario: {}\n", to_string(ds.scenario));
  out += fmt::format("frame_count: {}\n", ds.frames.size());
  out += fmt::format("imu_count: {}\n", ds.imu_stream.size());
  out += fmt::format("reference_count: {}\n", ds.reference_poses.size());
  out += fmt::format("image_width: {}\n", w);
  out += fmt::format("image_height: {}\n", h);
  out += fmt::format("frame_rate_hz: {}\n", ds.meta.frame_rate_hz);
  out += fmt::format("imu_rate_hz: {}\n", ds.meta.imu_rate_hz);
  out += fmt::format("rate_tolerance: {}\n", ds.meta.rate_tolerance);
  out += fmt::format("time_epoch: \"{}\"\n", ds.meta.time_epoch);
  out += fmt::format("pose_convention: \"{}\"\n", kPoseConvention);
  out += "imu_columns: \"t,gx,gy,gz,ax,ay,az\"\n";
  out += "reference_columns: \"t,tx,ty,tz,qw,qx,qy,qz\"\n";
  return out;
}

void save_sequence(const SequenceDataset& ds, const fs::path& dir) {
  fs::create_directories(dir / "frames");
  write_text(dir / "manifest", manifest_text(ds));

  std::string times = "index,t\n";
  for (std::size_t i = 0; i < ds.frames.size(); ++i) {
    times += fmt::format("{},{}\n", i, ds.frames[i].timestamp);
    write_png_gray(dir / "frames" / frame_name(i), ds.frames[i].image);
  }
  write_text(dir / "frame_times.csv", times);

  std::string imu = "t,gx,gy,gz,ax,ay,az\n";
  for (const auto& s : ds.imu_stream) {
    imu += fmt::format("{},{},{},{},{},{},{}\n", s.timestamp, s.angular_velocity.x(),
                       s.angular_velocity.y(), s.angular_velocity.z(), s.linear_acceleration.x(),
                       s.linear_acceleration.y(), s.linear_acceleration.z());
  }
  write_text(dir / "imu.csv", imu);

  std::string gt = "t,tx,ty,tz,qw,qx,qy,qz\n";
  for (const auto& p : ds.reference_poses) {
    gt += fmt::format("{},{},{},{},{},{},{},{}\n", p.timestamp, p.translation.x(),
                      p.translation.y(), p.translation.z(), p.rotation.w(), p.rotation.x(),
                      p.rotation.y(), p.rotation.z());
  }
  write_text(dir / "gt.csv", gt);
}

}  // namespace duvio
