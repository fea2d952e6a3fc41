#pragma once

#include <cmath>

#include "duvio/core/error.hpp"

namespace duvio {

template <typename T>
std::vector<T> retain_fraction(const std::vector<T>& items, double fraction, RetainMode mode) {
  const std::size_t keep = retained_count(items.size(), fraction);
  std::vector<T> out;
  out.reserve(keep);
  if (mode == RetainMode::prefix) {
    out.assign(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(keep));
  } else if (keep > 0) {
    const double step = static_cast<double>(items.size()) / static_cast<double>(keep);
    for (std::size_t i = 0; i < keep; ++i)
      out.push_back(items[static_cast<std::size_t>(std::floor(static_cast<double>(i) * step))]);
  }
  return out;
}

}  // namespace duvio
