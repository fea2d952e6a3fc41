#pragma once

#include <cstddef>
#include <vector>

#include "duvio/dataio/types.hpp"

namespace duvio {

struct WindowOptions {
  // Frames are resampled to this size when both are non-zero.
  std::size_t image_width = 0;
  std::size_t image_height = 0;
  // Skip copying rasters (targets and IMU only).
  bool include_images = true;
  // Leave targets zero; reference poses are then not required.
  bool with_targets = true;
};

// Frame rasters resized to the network input size.
Image preprocess_frame(const Image& image, std::size_t width, std::size_t height);

// One window per consecutive frame pair, in frame order. The 11 IMU samples
// sit on a uniform grid from frame_a.timestamp to frame_b.timestamp
// (inclusive), linearly interpolated from the raw stream. Targets come from
// the slerp-interpolated reference at both frame times.
std::vector<SampleWindow> build_windows(const SequenceDataset& dataset,
                                        const WindowOptions& options = {});

// Targets only: one PoseDelta per consecutive frame pair.
std::vector<PoseDelta> reference_deltas(const SequenceDataset& dataset);

// Reference pose at every frame timestamp.
std::vector<AbsolutePose> reference_at_frames(const SequenceDataset& dataset);

}  // namespace duvio
