// duvio: command-line front end for the dehazing + visual-inertial odometry
// pipeline.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "duvio/core/error.hpp"
#include "duvio/dataio/export.hpp"
#include "duvio/dataio/sequence_io.hpp"
#include "duvio/dataio/windows.hpp"
#include "duvio/dehaze/metrics.hpp"
#include "duvio/dehaze/weights.hpp"
#include "duvio/eval/report.hpp"
#include "duvio/pipeline/pipeline.hpp"
#include "duvio/vionet/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace duvio;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
  std::string config;
  bool verbose = false;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), "cannot read");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw LoadError(path.string(), "cannot write");
  out << j.dump(2) << '\n';
}

// Experiment config from --config (or defaults), with global overrides.
ExperimentConfig experiment(const Globals& g, std::string* text = nullptr) {
  std::string body = g.config.empty() ? std::string() : read_text(g.config);
  ExperimentConfig cfg = parse_config(body);
  if (g.seed) apply_seed(cfg, *g.seed);
  if (g.deterministic) cfg.determinism = true;
  if (text) *text = body;
  return cfg;
}

// A --cfg file holding VioConfig keys, either at top level or under `vio:`.
VioConfig vio_config_file(const std::string& path, const Globals& g) {
  VioConfig cfg;
  if (!path.empty()) {
    json j = yaml_to_json(read_text(path));
    if (j.is_object() && j.contains("vio")) j = j.at("vio");
    if (!j.is_null()) cfg = vio_config_from_json(j);
  }
  if (g.seed) cfg.seed = *g.seed + 17;
  return cfg;
}

void print_config_error(const ConfigError& e) {
  std::cerr << "error: " << e.what() << '\n';
}

void log_line(const Globals& g, const std::string& msg) {
  if (g.verbose) std::cerr << msg << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"duvio: dehazing + visual-inertial odometry pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Experiment seed (overrides config)");
  app.add_flag("--deterministic", g.deterministic, "Force determinism mode");
  app.add_option("--config", g.config, "Experiment config (YAML)");
  app.add_flag("-v,--verbose", g.verbose, "Progress on stderr");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate synthetic sequences from the config");
  std::string synth_out;
  synth->add_option("--out", synth_out, "Output directory")->required();

  // disturb
  auto* disturb = app.add_subcommand("disturb", "Apply a visual disturbance to a sequence");
  std::string dist_in, dist_out, dist_scenario = "turbid";
  TurbidityParams turb;
  DistortionParams distp;
  disturb->add_option("--in", dist_in, "Input sequence")->required();
  disturb->add_option("--out", dist_out, "Output sequence")->required();
  disturb->add_option("--scenario", dist_scenario, "turbid | distortion");
  disturb->add_option("--beta", turb.attenuation_beta, "Turbidity attenuation");
  disturb->add_option("--airlight", turb.airlight, "Turbidity airlight");
  disturb->add_option("--depth", turb.depth.near, "Constant depth proxy (m)");
  disturb->add_option("--k1", distp.radial_k1, "Radial k1");
  disturb->add_option("--k2", distp.radial_k2, "Radial k2");
  disturb->add_option("--blur", distp.blur_sigma, "Blur sigma (px)");
  disturb->add_option("--noise", distp.noise_sigma, "Noise sigma");

  // dehaze-train
  auto* dtrain = app.add_subcommand("dehaze-train", "Train the dehazing GAN");
  std::string dt_data, dt_cfg, dt_out, dt_log;
  dtrain->add_option("--data", dt_data, "Pairs directory (hazy/ and clean/)")->required();
  dtrain->add_option("--cfg", dt_cfg, "Config with a dehaze_cfg section");
  dtrain->add_option("--out", dt_out, "Weights file")->required();
  dtrain->add_option("--log", dt_log, "Training log (JSON)");

  // dehaze-run
  auto* drun = app.add_subcommand("dehaze-run", "Dehaze every frame of a sequence");
  std::string dr_weights, dr_in, dr_out;
  drun->add_option("--weights", dr_weights)->required();
  drun->add_option("--in", dr_in)->required();
  drun->add_option("--out", dr_out)->required();

  // dehaze-eval
  auto* deval = app.add_subcommand("dehaze-eval", "Image-quality metrics of a dehazer");
  std::string de_weights, de_pairs, de_report;
  deval->add_option("--weights", de_weights)->required();
  deval->add_option("--pairs", de_pairs)->required();
  deval->add_option("--report", de_report)->required();

  // vio-train
  auto* vtrain = app.add_subcommand("vio-train", "Train the VIO network");
  std::string vt_data, vt_cfg, vt_dehaze, vt_out, vt_log;
  std::vector<std::string> vt_val;
  vtrain->add_option("--data", vt_data, "Directory of sequences")->required();
  vtrain->add_option("--cfg", vt_cfg, "VIO config (YAML)");
  vtrain->add_option("--dehaze", vt_dehaze, "Dehazer weights (frozen)");
  vtrain->add_option("--val", vt_val, "Sequence ids held out for validation");
  vtrain->add_option("--out", vt_out)->required();
  vtrain->add_option("--log", vt_log, "Training log (JSON)");

  // vio-infer
  auto* vinfer = app.add_subcommand("vio-infer", "Estimate relative poses for a sequence");
  std::string vi_weights, vi_dehaze, vi_seq, vi_out;
  vinfer->add_option("--weights", vi_weights)->required();
  vinfer->add_option("--dehaze", vi_dehaze);
  vinfer->add_option("--seq", vi_seq)->required();
  vinfer->add_option("--out", vi_out)->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Score predictions against a sequence's reference");
  std::string ev_pred, ev_ref, ev_scenario = "original", ev_out, ev_mode = "pooled";
  bool ev_dehazed = false, ev_geodesic = false;
  eval->add_option("--pred", ev_pred)->required();
  eval->add_option("--ref", ev_ref)->required();
  eval->add_option("--scenario", ev_scenario);
  eval->add_flag("--dehazed", ev_dehazed);
  eval->add_option("--rmse-mode", ev_mode, "pooled | norm");
  eval->add_flag("--geodesic", ev_geodesic, "Geodesic rotation error");
  eval->add_option("--out", ev_out)->required();

  // report
  auto* report = app.add_subcommand("report", "Render tables and charts from report files");
  std::vector<std::string> rp_in;
  std::string rp_charts, rp_out = ".";
  report->add_option("--in", rp_in)->required();
  report->add_option("--charts", rp_charts);
  report->add_option("--out", rp_out);

  // run
  auto* run = app.add_subcommand("run", "Full pipeline from --config");

  // export-windows
  auto* exportw = app.add_subcommand("export-windows", "Dump training windows of a sequence");
  std::string ew_seq, ew_out;
  std::size_t ew_w = 0, ew_h = 0;
  exportw->add_option("--seq", ew_seq)->required();
  exportw->add_option("--out", ew_out)->required();
  exportw->add_option("--width", ew_w);
  exportw->add_option("--height", ew_h);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      ExperimentConfig cfg = experiment(g);
      if (!cfg.synthetic.enabled) throw ConfigError({"synth: the config has no synthetic section"});
      for (std::size_t i = 0; i < cfg.synthetic.sequences.size(); ++i) {
        const SequenceDataset ds = synthesize_configured(cfg, i);
        save_sequence(ds, fs::path(synth_out) / ds.sequence_id);
        log_line(g, fmt::format("wrote {} ({} frames)", ds.sequence_id, ds.frames.size()));
      }
    } else if (*disturb) {
      const Scenario s = parse_scenario(dist_scenario);
      turb.depth.far = turb.depth.near;
      distp.seed = g.seed.value_or(0);
      const SequenceDataset in = load_sequence(dist_in);
      save_sequence(disturb_sequence(in, s, turb, distp), dist_out);
    } else if (*dtrain) {
      ExperimentConfig cfg;
      if (!dt_cfg.empty()) cfg = parse_config(read_text(dt_cfg));
      if (g.seed) apply_seed(cfg, *g.seed);
      const auto pairs = load_image_pairs(dt_data);
      GeneratorConfig gen = cfg.dehaze.generator;
      gen.width = pairs.front().hazy.width();
      gen.height = pairs.front().hazy.height();
      auto result = train_dehazer(pairs, gen, cfg.dehaze.discriminator, cfg.dehaze.train,
                                  [&](const DehazeEpochLog& e) {
                                    log_line(g, fmt::format("epoch {} gen {:.4f} disc {:.4f} l1 {:.5f} val_psnr {:.2f}",
                                                            e.epoch, e.generator_loss, e.discriminator_loss,
                                                            e.reconstruction_loss, e.val_psnr));
                                  });
      save_dehazer(dt_out, result.model);
      if (!dt_log.empty()) write_json(dt_log, to_json(result.log));
    } else if (*drun) {
      const DehazeModel model = load_dehazer(dr_weights);
      save_sequence(dehaze_sequence(load_sequence(dr_in), model.generator), dr_out);
    } else if (*deval) {
      const DehazeModel model = load_dehazer(de_weights);
      const DehazeEvaluation ev = evaluate_dehazer(model.generator, load_image_pairs(de_pairs));
      const json row{{"backbone", std::string(to_string(model.generator.config().backbone))},
                     {"pairs", ev.pairs},
                     {"psnr", ev.psnr_dehazed},
                     {"ssim", ev.ssim_dehazed},
                     {"mse", ev.mse_dehazed},
                     {"rmse", ev.rmse_dehazed},
                     {"input", {{"psnr", ev.psnr_hazy}, {"ssim", ev.ssim_hazy}, {"mse", ev.mse_hazy},
                                {"rmse", ev.rmse_hazy}}}};
      write_json(de_report, {{"rows", json::array({row})}});
      fmt::print("{:<10} {:>10} {:>8} {:>10} {:>8}\n", "backbone", "PSNR", "SSIM", "MSE", "RMSE");
      fmt::print("{:<10} {:>10.4f} {:>8.4f} {:>10.2f} {:>8.3f}\n", row["backbone"].get<std::string>(),
                 std::min(ev.psnr_dehazed, kPsnrTextCap), ev.ssim_dehazed, ev.mse_dehazed, ev.rmse_dehazed);
    } else if (*vtrain) {
      const VioConfig cfg = vio_config_file(vt_cfg, g);
      std::optional<DehazeModel> dehazer;
      if (!vt_dehaze.empty()) dehazer = load_dehazer(vt_dehaze);
      Generator* gen = dehazer ? &dehazer->generator : nullptr;
      std::vector<SequenceDataset> train, val;
      for (const auto& dir : list_sequences(vt_data)) {
        const bool held_out = std::find(vt_val.begin(), vt_val.end(), dir.filename().string()) != vt_val.end();
        (held_out ? val : train).push_back(load_sequence(dir));
      }
      auto result = train_vio(prepare_windows(train, cfg, gen), prepare_windows(val, cfg, gen), cfg,
                              cfg.joint_dehaze_finetune ? gen : nullptr, [&](const VioEpochLog& e) {
                                log_line(g, fmt::format("epoch {} train {:.6f} val {:.6f}", e.epoch,
                                                        e.train_loss, e.val_loss));
                              });
      save_vio(vt_out, result.net);
      if (!vt_log.empty()) write_json(vt_log, to_json(result));
    } else if (*vinfer) {
      const VioNet net = load_vio(vi_weights);
      std::optional<DehazeModel> dehazer;
      if (!vi_dehaze.empty()) dehazer = load_dehazer(vi_dehaze);
      const auto deltas = infer_sequence(load_sequence(vi_seq), net, dehazer ? &dehazer->generator : nullptr);
      write_deltas_csv(vi_out, deltas);
    } else if (*eval) {
      const auto pred = read_deltas_csv(ev_pred);
      const SequenceDataset ref_seq = load_sequence_metadata(ev_ref);
      const auto ref = reference_deltas(ref_seq);
      auto reports = score_sequence(ref_seq.sequence_id, parse_scenario(ev_scenario), ev_dehazed, pred, ref);
      if (ev_mode != "pooled" || ev_geodesic) {
        RmseOptions opts;
        if (ev_mode == "norm") opts.mode = RmseMode::norm;
        else if (ev_mode != "pooled") throw ConfigError({"--rmse-mode must be pooled or norm"});
        opts.geodesic_rotation = ev_geodesic;
        const auto p = split_three(pred), r = split_three(ref);
        for (auto& rep : reports) {
          const RmsePair alt = compute_rmse(p[rep.sub_sequence_index - 1], r[rep.sub_sequence_index - 1], opts);
          rep.v_rmse = alt.v_rmse;
          rep.phi_rmse = alt.phi_rmse;
        }
      }
      write_json(ev_out, {{"reports", reports_to_json(reports)}});
      std::cout << render_table(reports, {});
    } else if (*report) {
      std::vector<RmseReport> all;
      for (const auto& path : rp_in) {
        const auto part = reports_from_json(json::parse(read_text(path)));
        all.insert(all.end(), part.begin(), part.end());
      }
      const auto out = render_reports(all, reference_baselines(), rp_out, rp_charts);
      std::cout << read_text(out.table);
    } else if (*run) {
      std::string text;
      const ExperimentConfig cfg = experiment(g, &text);
      const auto result = run_pipeline(cfg, text, [&](const std::string& m) { log_line(g, m); });
      std::cout << read_text(result.dir / "report.txt");
    } else if (*exportw) {
      WindowOptions opts;
      opts.image_width = ew_w;
      opts.image_height = ew_h;
      export_windows(build_windows(load_sequence(ew_seq), opts), ew_out);
    }
  } catch (const ConfigError& e) {
    print_config_error(e);
    return 2;
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
