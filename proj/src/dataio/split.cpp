#include "duvio/dataio/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace duvio {

DatasetSplit split_dataset(const std::vector<std::string>& available, const DatasetSplit& split) {
  std::vector<std::string> issues;
  std::set<std::string> seen;
  auto check = [&](const std::vector<std::string>& ids, const char* part) {
    for (const auto& id : ids) {
      if (std::find(available.begin(), available.end(), id) == available.end()) {
        issues.push_back(fmt::format("{} split: unknown sequence id '{}'", part, id));
      }
      if (!seen.insert(id).second) {
        issues.push_back(fmt::format("{} split: sequence '{}' already assigned", part, id));
      }
    }
  };
  check(split.train, "train");
  check(split.val, "val");
  check(split.test, "test");
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return split;
}

std::size_t retained_count(std::size_t n, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError({fmt::format("data fraction {} not in (0, 1]", fraction)});
  }
  const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::min(keep, n);
}

SequenceDataset retain_sequence_fraction(const SequenceDataset& ds, double fraction,
                                         RetainMode mode) {
  if (ds.frames.size() < 2 || fraction == 1.0) {
    (void)retained_count(ds.frames.size(), fraction);
    return ds;
  }
  SequenceDataset out = ds;
  if (mode == RetainMode::prefix) {
    // Keep the frames spanning round(fraction * windows) consecutive windows.
    const std::size_t windows = std::max<std::size_t>(1, retained_count(ds.frames.size() - 1, fraction));
    out.frames.resize(windows + 1);
  } else {
    const auto step = static_cast<std::size_t>(std::max(1.0, std::round(1.0 / fraction)));
    out.frames.clear();
    for (std::size_t i = 0; i < ds.frames.size(); i += step) out.frames.push_back(ds.frames[i]);
    out.meta.frame_rate_hz = ds.meta.frame_rate_hz / static_cast<double>(step);
  }
  const double t_end = out.frames.back().timestamp;
  // Keep one IMU sample and one reference knot past the last frame so the
  // final interval stays covered.
  auto imu_end = std::upper_bound(out.imu_stream.begin(), out.imu_stream.end(), t_end,
                                  [](double t, const ImuSample& s) { return t < s.timestamp; });
  if (imu_end != out.imu_stream.end()) ++imu_end;
  out.imu_stream.erase(imu_end, out.imu_stream.end());
  auto ref_end = std::upper_bound(out.reference_poses.begin(), out.reference_poses.end(), t_end,
                                  [](double t, const AbsolutePose& p) { return t < p.timestamp; });
  if (ref_end != out.reference_poses.end()) ++ref_end;
  out.reference_poses.erase(ref_end, out.reference_poses.end());
  return out;
}

}  // namespace duvio
