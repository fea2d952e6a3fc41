#pragma once

#include <filesystem>
#include <vector>

#include "duvio/dataio/types.hpp"

namespace duvio {

// Writes windows.bin (float64 little-endian records) and windows.json (an
// index declaring each field's shape, dtype and byte offset).
void export_windows(const std::vector<SampleWindow>& windows, const std::filesystem::path& dir);

// CSV with header "index,vx,vy,vz,phix,phiy,phiz", shortest round-trip numbers.
void write_deltas_csv(const std::filesystem::path& path, const std::vector<PoseDelta>& deltas);
std::vector<PoseDelta> read_deltas_csv(const std::filesystem::path& path);

}  // namespace duvio
