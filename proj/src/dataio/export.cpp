#include "duvio/dataio/export.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include <fmt/format.h>

#include "json.hpp"

#include "duvio/core/error.hpp"

namespace duvio {

void export_windows(const std::vector<SampleWindow>& windows, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::size_t w = windows.empty() ? 0 : windows.front().frame_a.image.width();
  const std::size_t h = windows.empty() ? 0 : windows.front().frame_a.image.height();
  const std::size_t image_bytes = w * h * sizeof(double);
  const std::size_t imu_bytes = kImuWindow * 7 * sizeof(double);

  nlohmann::json index;
  index["format"] = "duvio-windows";
  index["version"] = 1;
  index["count"] = windows.size();
  index["byte_order"] = "little";
  std::size_t offset = 0;
  auto field = [&](const char* name, std::vector<std::size_t> shape, std::size_t bytes,
                   const char* layout) {
    index["fields"].push_back(
        {{"name", name}, {"dtype", "float64"}, {"shape", shape}, {"offset", offset}, {"layout", layout}});
    offset += bytes;
  };
  field("timestamps", {2}, 2 * sizeof(double), "t_a,t_b");
  field("frame_a", {h, w}, image_bytes, "row-major intensity in [0,1]");
  field("frame_b", {h, w}, image_bytes, "row-major intensity in [0,1]");
  field("imu", {kImuWindow, 7}, imu_bytes, "t,gx,gy,gz,ax,ay,az");
  field("target", {6}, 6 * sizeof(double), "vx,vy,vz,phix,phiy,phiz");
  index["record_bytes"] = offset;

  std::ofstream bin(dir / "windows.bin", std::ios::binary);
  if (!bin) throw LoadError((dir / "windows.bin").string(), "cannot write");
  auto put = [&](double v) { bin.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
  for (const auto& win : windows) {
    if (win.frame_a.image.width() != w || win.frame_a.image.height() != h ||
        win.frame_b.image.width() != w || win.frame_b.image.height() != h) {
      throw ShapeError("export_windows: windows have differing frame sizes");
    }
    put(win.frame_a.timestamp);
    put(win.frame_b.timestamp);
    for (double v : win.frame_a.image.pixels()) put(v);
    for (double v : win.frame_b.image.pixels()) put(v);
    for (const auto& s : win.imu) {
      put(s.timestamp);
      for (int k = 0; k < 3; ++k) put(s.angular_velocity[k]);
      for (int k = 0; k < 3; ++k) put(s.linear_acceleration[k]);
    }
    for (int k = 0; k < 3; ++k) put(win.target.v[k]);
    for (int k = 0; k < 3; ++k) put(win.target.phi[k]);
  }
  std::ofstream(dir / "windows.json") << index.dump(2) << "\n";
}

}  // namespace duvio

namespace duvio {

void write_deltas_csv(const std::filesystem::path& path, const std::vector<PoseDelta>& deltas) {
  std::ofstream out(path);
  if (!out) throw LoadError(path.string(), "cannot write");
  out << "index,vx,vy,vz,phix,phiy,phiz\n";
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const auto& d = deltas[i];
    out << fmt::format("{},{},{},{},{},{},{}\n", i, d.v.x(), d.v.y(), d.v.z(), d.phi.x(),
                       d.phi.y(), d.phi.z());
  }
}

std::vector<PoseDelta> read_deltas_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), "missing file");
  std::string line;
  std::getline(in, line);
  std::vector<PoseDelta> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 7> v{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t k = 0; k < v.size(); ++k) {
      const auto [next, ec] = std::from_chars(p, end, v[k]);
      if (ec != std::errc() || (k + 1 < v.size() && (next == end || *next != ',')) ||
          (k + 1 == v.size() && next != end && *next != '\r')) {
        throw ValidationError(fmt::format("{}: malformed row {}", path.string(), row), row);
      }
      p = next + 1;
    }
    PoseDelta d;
    d.v = {v[1], v[2], v[3]};
    d.phi = {v[4], v[5], v[6]};
    out.push_back(d);
    ++row;
  }
  return out;
}

}  // namespace duvio
