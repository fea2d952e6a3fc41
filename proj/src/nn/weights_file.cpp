#include "duvio/nn/weights_file.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "duvio/core/error.hpp"

namespace duvio::nn {

namespace {
constexpr char kMagic[8] = {'D', 'U', 'V', 'I', 'O', 'W', 'T', '1'};
static_assert(std::endian::native == std::endian::little, "weights I/O assumes little-endian");
}  // namespace

void write_weights(const std::filesystem::path& path, const nlohmann::json& meta,
                   const ParamSet& params) {
  nlohmann::json header;
  header["format"] = "duvio-weights";
  header["version"] = 1;
  header["meta"] = meta;
  header["tensors"] = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& e : params.entries()) {
    const auto count = static_cast<std::uint64_t>(e.var.value().size());
    header["tensors"].push_back({{"name", e.name},
                                 {"shape", e.var.shape()},
                                 {"dtype", "float64"},
                                 {"trainable", e.trainable},
                                 {"offset", offset},
                                 {"count", count}});
    offset += count * sizeof(double);
  }
  const std::string text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError(path.string(), "cannot open weights file for writing");
  const auto len = static_cast<std::uint64_t>(text.size());
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& e : params.entries()) {
    out.write(reinterpret_cast<const char*>(e.var.value().data()),
              static_cast<std::streamsize>(e.var.value().size() * sizeof(double)));
  }
  if (!out) throw LoadError(path.string(), "failed writing weights file");
}

WeightsFile read_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), "cannot open weights file");
  char magic[8];
  std::uint64_t len = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw LoadError(path.string(), "not a duvio weights file");
  }
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw LoadError(path.string(), "truncated weights header");
  WeightsFile file;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path.string(), std::string("bad weights header: ") + e.what());
  }
  file.meta = header.value("meta", nlohmann::json::object());
  for (const auto& t : header.at("tensors")) {
    if (t.at("dtype") != "float64") throw LoadError(path.string(), "unsupported dtype");
    Shape shape = t.at("shape").get<Shape>();
    std::vector<double> values(numel(shape));
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw LoadError(path.string(), "truncated weights payload");
    const std::string name = t.at("name");
    file.order.push_back(name);
    file.tensors.emplace(name, Tensor(std::move(shape), std::move(values)));
  }
  return file;
}

}  // namespace duvio::nn
