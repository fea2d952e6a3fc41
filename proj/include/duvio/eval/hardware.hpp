#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

#include "duvio/core/error.hpp"

namespace duvio {

// Source of GPU readings. Any method may return nullopt when the value
// cannot be read.
class GpuProbe {
 public:
  virtual ~GpuProbe() = default;
  virtual std::string name() const = 0;
  virtual std::optional<double> power_w() = 0;
  virtual std::optional<double> util_percent() = 0;
  virtual std::optional<double> memory_mib() = 0;
  virtual std::optional<double> temperature_c() = 0;
};

// Returns fixed values.
class StubProbe : public GpuProbe {
 public:
  StubProbe(std::optional<double> power, std::optional<double> util, std::optional<double> memory,
            std::optional<double> temperature)
      : power_(power), util_(util), memory_(memory), temperature_(temperature) {}
  std::string name() const override { return "stub"; }
  std::optional<double> power_w() override { return power_; }
  std::optional<double> util_percent() override { return util_; }
  std::optional<double> memory_mib() override { return memory_; }
  std::optional<double> temperature_c() override { return temperature_; }

 private:
  std::optional<double> power_, util_, memory_, temperature_;
};

// Runs one shell command per field and parses its single-line numeric
// output. Fields without a command, failing commands and unparsable output
// read as unavailable. Keys: power, util, memory, temperature.
class CommandProbe : public GpuProbe {
 public:
  explicit CommandProbe(std::map<std::string, std::string> commands);
  std::string name() const override { return "command"; }
  std::optional<double> power_w() override { return read("power"); }
  std::optional<double> util_percent() override { return read("util"); }
  std::optional<double> memory_mib() override { return read("memory"); }
  std::optional<double> temperature_c() override { return read("temperature"); }

 private:
  std::optional<double> read(const std::string& key) const;
  std::map<std::string, std::string> commands_;
};

// Parses "  47.41\n"-style output; nullopt unless exactly one number.
std::optional<double> parse_single_number(const std::string& text);

struct HardwareMetrics {
  double inference_time = 0.0;  // s, wall clock
  std::optional<double> power_w;
  std::optional<double> gpu_util_percent;
  std::optional<double> memory_mib;
  std::optional<double> temperature_c;
  std::string probe = "none";
};

// Thrown when the workload fails; the workload's exception is nested.
class WorkloadError : public Error {
 public:
  explicit WorkloadError(double elapsed);
  double elapsed() const { return elapsed_; }

 private:
  double elapsed_;
};

// Times `run` and reads the probe afterwards. Without a probe every GPU
// field stays unavailable.
HardwareMetrics capture_hardware_metrics(const std::function<void()>& run, GpuProbe* probe = nullptr);

// Absent fields are written as the string "unavailable".
nlohmann::json to_json(const HardwareMetrics& m);
HardwareMetrics hardware_metrics_from_json(const nlohmann::json& j);

}  // namespace duvio
