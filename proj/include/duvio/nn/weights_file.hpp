#pragma once

// Binary weight container:
//   8 bytes   magic "DUVIOWT1"
//   8 bytes   little-endian uint64 header length L
//   L bytes   UTF-8 JSON header {"format","version","meta",
//             "tensors":[{"name","shape","dtype":"float64","offset","count"}]}
//   payload   raw little-endian float64 tensors in header order

#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"

#include "duvio/core/tensor.hpp"
#include "duvio/nn/layers.hpp"

namespace duvio::nn {

struct WeightsFile {
  nlohmann::json meta;
  std::vector<std::string> order;
  std::map<std::string, Tensor> tensors;
};

void write_weights(const std::filesystem::path& path, const nlohmann::json& meta,
                   const ParamSet& params);
WeightsFile read_weights(const std::filesystem::path& path);

}  // namespace duvio::nn
