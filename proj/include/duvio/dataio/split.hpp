#pragma once

#include <string>
#include <vector>

#include "duvio/dataio/types.hpp"

namespace duvio {

struct DatasetSplit {
  std::vector<std::string> train{"h02", "h04", "h06"};
  std::vector<std::string> val{"h03", "h05"};
  std::vector<std::string> test{"h01", "h07"};

  bool operator==(const DatasetSplit&) const = default;
};

// Checks every id in `split` against `available` and that no id is used
// twice. Returns the split unchanged. Throws ConfigError listing unknown ids.
DatasetSplit split_dataset(const std::vector<std::string>& available,
                           const DatasetSplit& split = {});

enum class RetainMode { prefix, stride };

// Keeps round(fraction * n) items: the first ones (prefix) or every k-th (stride).
std::size_t retained_count(std::size_t n, double fraction);

template <typename T>
std::vector<T> retain_fraction(const std::vector<T>& items, double fraction,
                               RetainMode mode = RetainMode::prefix);

// Truncates a sequence so only the leading fraction of frames (and the
// IMU/reference data they span) remains.
SequenceDataset retain_sequence_fraction(const SequenceDataset& dataset, double fraction,
                                         RetainMode mode = RetainMode::prefix);

}  // namespace duvio

#include "duvio/dataio/split_impl.hpp"
