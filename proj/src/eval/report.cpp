#include "duvio/eval/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/core/png_io.hpp"

namespace duvio {

std::vector<RmseReport> score_sequence(const std::string& sequence_id, Scenario scenario,
                                       bool dehazed, const std::vector<PoseDelta>& predictions,
                                       const std::vector<PoseDelta>& references) {
  if (predictions.size() != references.size()) {
    throw ValidationError(fmt::format("score_sequence {}: {} predictions vs {} references",
                                      sequence_id, predictions.size(), references.size()),
                          std::min(predictions.size(), references.size()));
  }
  const auto pred = split_three(predictions);
  const auto ref = split_three(references);
  std::vector<RmseReport> out;
  for (std::size_t k = 0; k < 3; ++k) {
    const RmsePair pooled = compute_rmse(pred[k], ref[k], {RmseMode::pooled, false});
    const RmsePair norm = compute_rmse(pred[k], ref[k], {RmseMode::norm, false});
    out.push_back({sequence_id, scenario, k + 1, pooled.v_rmse, pooled.phi_rmse, norm.v_rmse,
                   norm.phi_rmse, dehazed});
  }
  return out;
}

const std::vector<BaselineRow>& reference_baselines() {
  static const std::vector<BaselineRow> rows{
      {"OKVIS", "geometry-based", 0.0406, 0.1171},
      {"ORB-SLAM3", "geometry-based", 0.0198, 0.0212},
      {"VINet", "data-driven", 0.0497, 0.1495},
      {"DU-VIO (published)", "data-driven", 0.0111, 0.0188},
  };
  return rows;
}

nlohmann::json to_json(const RmseReport& r) {
  return {{"sequence_id", r.sequence_id},
          {"scenario", std::string(to_string(r.scenario))},
          {"sub_sequence_index", r.sub_sequence_index},
          {"v_rmse", r.v_rmse},
          {"phi_rmse", r.phi_rmse},
          {"v_rmse_norm", r.v_rmse_norm},
          {"phi_rmse_norm", r.phi_rmse_norm},
          {"dehazed", r.dehazed}};
}

RmseReport rmse_report_from_json(const nlohmann::json& j) {
  RmseReport r;
  r.sequence_id = j.at("sequence_id").get<std::string>();
  r.scenario = parse_scenario(j.at("scenario").get<std::string>());
  r.sub_sequence_index = j.at("sub_sequence_index").get<std::size_t>();
  r.v_rmse = j.at("v_rmse").get<double>();
  r.phi_rmse = j.at("phi_rmse").get<double>();
  r.v_rmse_norm = j.value("v_rmse_norm", 0.0);
  r.phi_rmse_norm = j.value("phi_rmse_norm", 0.0);
  r.dehazed = j.at("dehazed").get<bool>();
  return r;
}

nlohmann::json reports_to_json(const std::vector<RmseReport>& reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

std::vector<RmseReport> reports_from_json(const nlohmann::json& j) {
  const nlohmann::json& arr = j.is_object() ? j.at("reports") : j;
  std::vector<RmseReport> out;
  for (const auto& item : arr) out.push_back(rmse_report_from_json(item));
  return out;
}

std::string render_table(const std::vector<RmseReport>& reports,
                         const std::vector<BaselineRow>& baselines) {
  std::string out;
  out += "v_rmse = sqrt(sum |v_hat - v|^2 / (3T)) [m]; phi_rmse likewise on XYZ-Euler deltas [rad]\n";
  out += "*_norm columns use sqrt(sum |e|^2 / T)\n\n";
  out += fmt::format("{:<10} {:<11} {:>3} {:>8} {:>12} {:>12} {:>12} {:>12}\n", "sequence",
                     "scenario", "sub", "dehazed", "v_rmse", "phi_rmse", "v_norm", "phi_norm");
  for (const auto& r : reports) {
    out += fmt::format("{:<10} {:<11} {:>3} {:>8} {:>12.6f} {:>12.6f} {:>12.6f} {:>12.6f}\n",
                       r.sequence_id, to_string(r.scenario), r.sub_sequence_index,
                       r.dehazed ? "yes" : "no", r.v_rmse, r.phi_rmse, r.v_rmse_norm,
                       r.phi_rmse_norm);
  }
  if (!baselines.empty()) {
    out += "\nReference values (published figures, not reproduced here)\n";
    out += fmt::format("{:<20} {:<15} {:>8} {:>8}\n", "method", "family", "h01", "h07");
    for (const auto& b : baselines)
      out += fmt::format("{:<20} {:<15} {:>8.4f} {:>8.4f}\n", b.method, b.family, b.h01, b.h07);
  }
  return out;
}

namespace {

struct Canvas {
  std::size_t width, height;
  std::vector<unsigned char> rgb;

  Canvas(std::size_t w, std::size_t h) : width(w), height(h), rgb(w * h * 3, 255) {}

  void rect(long x0, long y0, long x1, long y1, std::array<unsigned char, 3> c) {
    x0 = std::clamp<long>(x0, 0, static_cast<long>(width));
    x1 = std::clamp<long>(x1, 0, static_cast<long>(width));
    y0 = std::clamp<long>(y0, 0, static_cast<long>(height));
    y1 = std::clamp<long>(y1, 0, static_cast<long>(height));
    for (long y = y0; y < y1; ++y)
      for (long x = x0; x < x1; ++x)
        std::copy(c.begin(), c.end(), rgb.begin() + (y * static_cast<long>(width) + x) * 3);
  }
};

constexpr std::array<std::array<unsigned char, 3>, 3> kSubColors{
    {{31, 119, 180}, {255, 127, 14}, {44, 160, 44}}};
constexpr std::array<unsigned char, 3> kAxis{90, 90, 90};

void draw_chart(const std::filesystem::path& path, const std::vector<const RmseReport*>& reports) {
  constexpr long kPanelW = 300, kPanelH = 160, kMargin = 20, kBar = 24, kGap = 4, kGroupGap = 18;
  Canvas canvas(2 * kPanelW + 3 * kMargin, 2 * kPanelH + 3 * kMargin);
  // row 0: v, row 1: phi; column 0: without dehazing, column 1: with.
  for (int row = 0; row < 2; ++row) {
    double peak = 0.0;
    for (const auto* r : reports) peak = std::max(peak, row == 0 ? r->v_rmse : r->phi_rmse);
    for (int col = 0; col < 2; ++col) {
      const long ox = kMargin + col * (kPanelW + kMargin);
      const long oy = kMargin + row * (kPanelH + kMargin);
      canvas.rect(ox, oy + kPanelH - 1, ox + kPanelW, oy + kPanelH + 1, kAxis);
      canvas.rect(ox - 1, oy, ox + 1, oy + kPanelH, kAxis);
      for (const auto* r : reports) {
        if (r->dehazed != (col == 1)) continue;
        const double value = row == 0 ? r->v_rmse : r->phi_rmse;
        const auto group = static_cast<long>(r->scenario);
        const auto sub = static_cast<long>(std::clamp<std::size_t>(r->sub_sequence_index, 1, 3) - 1);
        const long x = ox + 8 + group * (3 * (kBar + kGap) + kGroupGap) + sub * (kBar + kGap);
        const long h = peak > 0.0 ? static_cast<long>(value / peak * (kPanelH - 10)) : 0;
        canvas.rect(x, oy + kPanelH - 1 - h, x + kBar, oy + kPanelH - 1,
                    kSubColors[static_cast<std::size_t>(sub)]);
      }
    }
  }
  write_png_rgb(path, canvas.width, canvas.height, canvas.rgb);
}

}  // namespace

RenderedReports render_reports(const std::vector<RmseReport>& reports,
                               const std::vector<BaselineRow>& baselines,
                               const std::filesystem::path& dir,
                               const std::filesystem::path& chart_dir) {
  if (reports.empty()) throw ValidationError("render_reports: no reports", 0);
  std::filesystem::create_directories(dir);
  RenderedReports out;
  out.json = dir / "report.json";
  out.table = dir / "report.txt";

  auto base = nlohmann::json::array();
  for (const auto& b : baselines)
    base.push_back({{"method", b.method}, {"family", b.family}, {"h01", b.h01}, {"h07", b.h07}});
  const nlohmann::json doc{
      {"rmse_definition",
       {{"v_rmse", "sqrt(sum |v_hat - v|^2 / (3T)), meters"},
        {"phi_rmse", "sqrt(sum |phi_hat - phi|^2 / (3T)), XYZ-Euler deltas, radians"},
        {"norm_variant", "sqrt(sum |e|^2 / T)"}}},
      {"reports", reports_to_json(reports)},
      {"reference_baselines", {{"note", "published values, not reproduced"}, {"rows", base}}}};
  std::ofstream(out.json) << doc.dump(2) << '\n';
  std::ofstream(out.table) << render_table(reports, baselines);

  const auto charts = chart_dir.empty() ? dir / "charts" : chart_dir;
  std::filesystem::create_directories(charts);
  std::map<std::string, std::vector<const RmseReport*>> by_sequence;
  for (const auto& r : reports) by_sequence[r.sequence_id].push_back(&r);
  for (const auto& [id, group] : by_sequence) {
    out.charts.push_back(charts / fmt::format("{}.png", id));
    draw_chart(out.charts.back(), group);
  }
  return out;
}

}  // namespace duvio
