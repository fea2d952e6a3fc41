#pragma once

// On-disk sequence layout (one directory per sequence):
//   manifest          key: value text (YAML subset), see write_manifest
//   frame_times.csv   index,t
//   frames/NNNNNN.png 8-bit grayscale, named by integer frame index
//   imu.csv           t,gx,gy,gz,ax,ay,az
//   gt.csv            t,tx,ty,tz,qw,qx,qy,qz

#include <filesystem>
#include <string>

#include "duvio/dataio/types.hpp"

namespace duvio {

// Loads and validates. Throws LoadError (missing/unreadable file) or
// ValidationError (first offending row index).
SequenceDataset load_sequence(const std::filesystem::path& dir);

// Loads everything except the frame rasters (frames keep their timestamps).
SequenceDataset load_sequence_metadata(const std::filesystem::path& dir);

void save_sequence(const SequenceDataset& dataset, const std::filesystem::path& dir);

// Exact manifest text produced by save_sequence.
std::string manifest_text(const SequenceDataset& dataset);

// Checks the SequenceDataset invariants. Throws ValidationError.
void validate_sequence(const SequenceDataset& dataset);

}  // namespace duvio
