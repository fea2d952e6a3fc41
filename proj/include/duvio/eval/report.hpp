#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "duvio/dataio/types.hpp"
#include "duvio/eval/rmse.hpp"

namespace duvio {

struct RmseReport {
  std::string sequence_id;
  Scenario scenario = Scenario::original;
  std::size_t sub_sequence_index = 1;  // 1..3
  double v_rmse = 0.0;                 // pooled, meters
  double phi_rmse = 0.0;               // pooled, radians
  double v_rmse_norm = 0.0;            // per-norm variant
  double phi_rmse_norm = 0.0;
  bool dehazed = false;

  bool operator==(const RmseReport&) const = default;
};

// One report per third of the sequence.
std::vector<RmseReport> score_sequence(const std::string& sequence_id, Scenario scenario,
                                       bool dehazed, const std::vector<PoseDelta>& predictions,
                                       const std::vector<PoseDelta>& references);

// Published benchmark numbers, kept for side-by-side rendering only.
struct BaselineRow {
  std::string method;
  std::string family;
  double h01 = 0.0;
  double h07 = 0.0;
};

const std::vector<BaselineRow>& reference_baselines();

nlohmann::json to_json(const RmseReport& r);
RmseReport rmse_report_from_json(const nlohmann::json& j);
nlohmann::json reports_to_json(const std::vector<RmseReport>& reports);
std::vector<RmseReport> reports_from_json(const nlohmann::json& j);

std::string render_table(const std::vector<RmseReport>& reports,
                         const std::vector<BaselineRow>& baselines);

struct RenderedReports {
  std::filesystem::path json;
  std::filesystem::path table;
  std::vector<std::filesystem::path> charts;
};

// Writes <dir>/report.json, <dir>/report.txt and one chart per sequence under
// <chart_dir> (defaults to <dir>/charts). Each chart has a v row and a phi row,
// a without-dehazing column and a with-dehazing column, and bars grouped by
// scenario (original, distortion, turbid) x sub-sequence.
RenderedReports render_reports(const std::vector<RmseReport>& reports,
                               const std::vector<BaselineRow>& baselines,
                               const std::filesystem::path& dir,
                               const std::filesystem::path& chart_dir = {});

}  // namespace duvio
