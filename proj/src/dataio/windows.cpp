#include "duvio/dataio/windows.hpp"

#include <exception>

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/dataio/geometry.hpp"
#include "duvio/dataio/interpolate.hpp"

namespace duvio {

Image preprocess_frame(const Image& image, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) return image;
  return clamp01(resize_bilinear(image, width, height));
}

std::vector<AbsolutePose> reference_at_frames(const SequenceDataset& dataset) {
  const auto times = dataset.frame_times();
  try {
    return interpolate_reference(dataset.reference_poses, times);
  } catch (const RangeError& e) {
    throw RangeError(fmt::format("sequence {}: reference poses do not span every frame ({})",
                                 dataset.sequence_id, e.what()));
  }
}

std::vector<PoseDelta> reference_deltas(const SequenceDataset& dataset) {
  const auto poses = reference_at_frames(dataset);
  std::vector<PoseDelta> out;
  for (std::size_t i = 0; i + 1 < poses.size(); ++i) out.push_back(relative_pose(poses[i], poses[i + 1]));
  return out;
}

std::vector<SampleWindow> build_windows(const SequenceDataset& dataset, const WindowOptions& options) {
  if (dataset.frames.size() < 2) return {};
  const auto poses =
      options.with_targets ? reference_at_frames(dataset) : std::vector<AbsolutePose>{};
  const double half_period = 0.5 / dataset.meta.imu_rate_hz;
  const std::size_t count = dataset.frames.size() - 1;
  std::vector<SampleWindow> windows(count);
  std::vector<std::exception_ptr> errors(count);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(count); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    try {
      const Frame& a = dataset.frames[i];
      const Frame& b = dataset.frames[i + 1];
      SampleWindow& w = windows[i];
      w.frame_a.timestamp = a.timestamp;
      w.frame_b.timestamp = b.timestamp;
      if (options.include_images) {
        w.frame_a.image = preprocess_frame(a.image, options.image_width, options.image_height);
        w.frame_b.image = preprocess_frame(b.image, options.image_width, options.image_height);
      }
      const double span = b.timestamp - a.timestamp;
      for (std::size_t k = 0; k < kImuWindow; ++k) {
        const double t = k + 1 == kImuWindow
                             ? b.timestamp
                             : a.timestamp + span * static_cast<double>(k) /
                                                 static_cast<double>(kImuWindow - 1);
        try {
          w.imu[k] = interpolate_imu(dataset.imu_stream, t, half_period);
        } catch (const CoverageError& e) {
          throw CoverageError(fmt::format("sequence {}: IMU stream does not cover frames {}-{} ({})",
                                          dataset.sequence_id, i, i + 1, e.what()));
        }
      }
      if (options.with_targets) w.target = relative_pose(poses[i], poses[i + 1]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return windows;
}

}  // namespace duvio
