#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "duvio/core/error.hpp"
#include "duvio/eval/hardware.hpp"
#include "duvio/eval/report.hpp"
#include "duvio/pipeline/config.hpp"

namespace duvio {

// A stage failed; outputs written before the failure are left in place.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : Error(fmt_message(stage, what)), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  static std::string fmt_message(const std::string& stage, const std::string& what) {
    return "stage '" + stage + "' failed: " + what;
  }
  std::string stage_;
};

struct PipelineResult {
  std::filesystem::path dir;
  std::vector<RmseReport> reports;
  nlohmann::json provenance;
};

using PipelineLog = std::function<void(const std::string&)>;

// `config_text` is the raw config file (hashed into provenance.json).
PipelineResult run_pipeline(const ExperimentConfig& cfg, const std::string& config_text,
                            const PipelineLog& log = {});

std::unique_ptr<GpuProbe> make_probe(const HardwareSettings& settings);

// Synthetic sequence `index` of the config, undisturbed.
SequenceDataset synthesize_configured(const ExperimentConfig& cfg, std::size_t index);

std::string sha256_hex(const std::string& data);

// Image pairs from <dir>/hazy and <dir>/clean. Each side is either a folder of
// PNG files (matched by file name) or a sequence directory (matched by frame).
std::vector<ImagePair> load_image_pairs(const std::filesystem::path& dir);

// Every sequence directory (one holding a manifest) directly under `dir`,
// sorted by name.
std::vector<std::filesystem::path> list_sequences(const std::filesystem::path& dir);

}  // namespace duvio
