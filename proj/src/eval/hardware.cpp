#include "duvio/eval/hardware.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <sstream>

#include <fmt/format.h>

namespace duvio {

namespace {

std::mutex probe_mutex;

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json("unavailable");
}

std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  return std::nullopt;
}

}  // namespace

WorkloadError::WorkloadError(double elapsed)
    : Error(fmt::format("inference workload failed after {:.3f} s", elapsed)), elapsed_(elapsed) {}

std::optional<double> parse_single_number(const std::string& text) {
  std::istringstream in(text);
  std::string token, extra;
  if (!(in >> token) || (in >> extra)) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

CommandProbe::CommandProbe(std::map<std::string, std::string> commands)
    : commands_(std::move(commands)) {}

std::optional<double> CommandProbe::read(const std::string& key) const {
  const auto it = commands_.find(key);
  if (it == commands_.end() || it->second.empty()) return std::nullopt;
  FILE* pipe = ::popen(it->second.c_str(), "r");
  if (!pipe) return std::nullopt;
  std::string output;
  std::array<char, 256> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) output += buf.data();
  const int status = ::pclose(pipe);
  if (status != 0) return std::nullopt;
  return parse_single_number(output);
}

HardwareMetrics capture_hardware_metrics(const std::function<void()>& run, GpuProbe* probe) {
  HardwareMetrics m;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    run();
  } catch (...) {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::throw_with_nested(WorkloadError(elapsed));
  }
  m.inference_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (probe) {
    std::lock_guard lock(probe_mutex);
    m.probe = probe->name();
    m.power_w = probe->power_w();
    m.gpu_util_percent = probe->util_percent();
    m.memory_mib = probe->memory_mib();
    m.temperature_c = probe->temperature_c();
  }
  return m;
}

nlohmann::json to_json(const HardwareMetrics& m) {
  return {{"inference_time_s", m.inference_time},
          {"power_w", optional_json(m.power_w)},
          {"gpu_util_percent", optional_json(m.gpu_util_percent)},
          {"memory_mib", optional_json(m.memory_mib)},
          {"temperature_c", optional_json(m.temperature_c)},
          {"probe", m.probe}};
}

HardwareMetrics hardware_metrics_from_json(const nlohmann::json& j) {
  HardwareMetrics m;
  m.inference_time = j.at("inference_time_s").get<double>();
  m.power_w = optional_from_json(j.at("power_w"));
  m.gpu_util_percent = optional_from_json(j.at("gpu_util_percent"));
  m.memory_mib = optional_from_json(j.at("memory_mib"));
  m.temperature_c = optional_from_json(j.at("temperature_c"));
  m.probe = j.value("probe", "none");
  return m;
}

}  // namespace duvio
