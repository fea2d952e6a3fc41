#include "duvio/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>

#include <Eigen/Core>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "duvio/core/png_io.hpp"
#include "duvio/dataio/export.hpp"
#include "duvio/dataio/sequence_io.hpp"
#include "duvio/dataio/split.hpp"
#include "duvio/dataio/windows.hpp"
#include "duvio/dehaze/weights.hpp"
#include "duvio/vionet/train.hpp"

#ifndef DUVIO_VERSION
#define DUVIO_VERSION "unknown"
#endif

namespace duvio {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::unique_ptr<GpuProbe> make_probe(const HardwareSettings& s) {
  if (s.probe == "stub")
    return std::make_unique<StubProbe>(s.stub_power, s.stub_util, s.stub_memory, s.stub_temperature);
  if (s.probe == "command") return std::make_unique<CommandProbe>(s.commands);
  return nullptr;
}

SequenceDataset synthesize_configured(const ExperimentConfig& cfg, std::size_t index) {
  const auto& s = cfg.synthetic;
  const auto& seq = s.sequences.at(index);
  SynthSpec spec;
  spec.sequence_id = seq.id;
  spec.trajectory.kind = seq.trajectory;
  spec.trajectory.speed = seq.speed;
  spec.trajectory.altitude = s.altitude;
  spec.trajectory.seed = cfg.seed + 31 + index;
  spec.duration = s.duration;
  spec.frame_rate = s.frame_rate;
  spec.imu_rate = s.imu_rate;
  spec.width = s.width;
  spec.height = s.height;
  spec.texture_seed = cfg.seed + 23;
  spec.gyro_noise = s.gyro_noise;
  spec.accel_noise = s.accel_noise;
  spec.gyro_bias = Eigen::Vector3d::Constant(s.gyro_bias);
  spec.accel_bias = Eigen::Vector3d::Constant(s.accel_bias);
  spec.frame_jitter = s.frame_jitter;
  spec.imu_jitter = s.imu_jitter;
  spec.seed = cfg.seed + 41 + index;
  spec.reference_stride = s.reference_stride;
  return synthesize_sequence(spec);
}

namespace {

bool is_sequence_dir(const fs::path& dir) { return fs::is_regular_file(dir / "manifest"); }

std::vector<Image> load_side(const fs::path& dir, std::vector<std::string>& names) {
  std::vector<Image> out;
  names.clear();
  if (is_sequence_dir(dir)) {
    const SequenceDataset ds = load_sequence(dir);
    for (std::size_t i = 0; i < ds.frames.size(); ++i) {
      out.push_back(ds.frames[i].image);
      names.push_back(fmt::format("{}", i));
    }
    return out;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    out.push_back(read_png_gray(f));
    names.push_back(f.filename().string());
  }
  return out;
}

}  // namespace

std::vector<ImagePair> load_image_pairs(const fs::path& dir) {
  const fs::path hazy_dir = dir / "hazy", clean_dir = dir / "clean";
  if (!fs::is_directory(hazy_dir)) throw LoadError(hazy_dir.string(), "missing directory");
  if (!fs::is_directory(clean_dir)) throw LoadError(clean_dir.string(), "missing directory");
  std::vector<std::string> hazy_names, clean_names;
  const auto hazy = load_side(hazy_dir, hazy_names);
  const auto clean = load_side(clean_dir, clean_names);
  if (hazy_names != clean_names)
    throw ValidationError(fmt::format("{}: hazy and clean sides do not match", dir.string()), 0);
  if (hazy.empty()) throw ValidationError(fmt::format("{}: no image pairs", dir.string()), 0);
  std::vector<ImagePair> out;
  for (std::size_t i = 0; i < hazy.size(); ++i) {
    if (!hazy[i].same_shape(clean[i]))
      throw ValidationError(fmt::format("{}: pair {} differs in size", dir.string(), hazy_names[i]), i);
    out.push_back({hazy[i], clean[i]});
  }
  return out;
}

std::vector<fs::path> list_sequences(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw LoadError(dir.string(), "missing directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory() && is_sequence_dir(e.path())) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

class StageRunner {
 public:
  StageRunner(json& timings, const PipelineLog& log) : timings_(timings), log_(log) {}

  template <typename F>
  auto run(const std::string& name, F&& f) {
    if (log_) log_(fmt::format("[{}] start", name));
    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&] {
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      timings_.push_back({{"stage", name}, {"seconds", s}});
      if (log_) log_(fmt::format("[{}] done in {:.2f} s", name, s));
    };
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        finish();
      } else {
        auto r = f();
        finish();
        return r;
      }
    } catch (const PipelineError&) {
      throw;
    } catch (const std::exception& e) {
      throw PipelineError(name, e.what());
    }
  }

  void note(const std::string& msg) const {
    if (log_) log_(msg);
  }

 private:
  json& timings_;
  const PipelineLog& log_;
};

using SequenceMap = std::map<std::string, SequenceDataset>;

std::vector<std::string> all_ids(const DatasetSplit& split) {
  std::vector<std::string> ids;
  for (const auto* group : {&split.train, &split.val, &split.test})
    for (const auto& id : *group) ids.push_back(id);
  return ids;
}

std::vector<SequenceDataset> pick(const SequenceMap& map, const std::vector<std::string>& ids) {
  std::vector<SequenceDataset> out;
  for (const auto& id : ids) out.push_back(map.at(id));
  return out;
}

std::vector<Scenario> pair_scenarios(const ExperimentConfig& cfg) {
  std::vector<Scenario> out;
  for (Scenario s : cfg.scenarios)
    if (s != Scenario::original) out.push_back(s);
  if (out.empty()) out.push_back(Scenario::turbid);
  return out;
}

std::vector<ImagePair> make_pairs(const SequenceMap& clean, const std::map<Scenario, SequenceMap>& disturbed,
                                  const std::vector<std::string>& ids, const std::vector<Scenario>& scenarios,
                                  const GeneratorConfig& gen, std::size_t max_pairs) {
  std::vector<ImagePair> all;
  for (Scenario s : scenarios)
    for (const auto& id : ids) {
      const auto& c = clean.at(id);
      const auto& d = disturbed.at(s).at(id);
      for (std::size_t i = 0; i < c.frames.size(); ++i) {
        all.push_back({resize_bilinear(d.frames[i].image, gen.width, gen.height),
                       resize_bilinear(c.frames[i].image, gen.width, gen.height)});
      }
    }
  if (max_pairs == 0 || all.size() <= max_pairs) return all;
  std::vector<ImagePair> out;
  for (std::size_t k = 0; k < max_pairs; ++k) out.push_back(all[k * all.size() / max_pairs]);
  return out;
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& cfg, const std::string& config_text,
                            const PipelineLog& log) {
  PipelineResult result;
  result.dir = cfg.output_dir;
  json timings = json::array();
  StageRunner stages(timings, log);
  fs::create_directories(cfg.output_dir);
  const fs::path data_dir = cfg.output_dir / "data";
  const fs::path model_dir = cfg.output_dir / "models";
  const fs::path pred_dir = cfg.output_dir / "predictions";
  const fs::path log_dir = cfg.output_dir / "logs";
  for (const auto& d : {model_dir, pred_dir, log_dir}) fs::create_directories(d);

  const json effective = to_json(cfg);
  json provenance{{"config_sha256", sha256_hex(config_text.empty() ? effective.dump() : config_text)},
                  {"seed", cfg.seed},
                  {"determinism", cfg.determinism},
                  {"versions",
                   {{"duvio", DUVIO_VERSION},
                    {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                                          EIGEN_MINOR_VERSION)},
                    {"compiler", __VERSION__},
                    {"cxx_standard", __cplusplus}}},
                  {"config", effective}};
  auto write_provenance = [&] {
    provenance["stages"] = timings;
    std::ofstream(cfg.output_dir / "provenance.json") << provenance.dump(2) << '\n';
  };

  try {
    // 1. Sequences
    SequenceMap clean = stages.run("data", [&] {
      SequenceMap out;
      if (cfg.synthetic.enabled) {
        for (std::size_t i = 0; i < cfg.synthetic.sequences.size(); ++i) {
          SequenceDataset ds = synthesize_configured(cfg, i);
          save_sequence(ds, data_dir / "original" / ds.sequence_id);
          out.emplace(ds.sequence_id, std::move(ds));
        }
      } else {
        if (cfg.dataset_root.empty()) throw ConfigError({"dataset_root is required without synthetic data"});
        for (const auto& id : all_ids(cfg.split)) out.emplace(id, load_sequence(cfg.dataset_root / id));
      }
      std::vector<std::string> available;
      for (const auto& [id, ds] : out) available.push_back(id);
      split_dataset(available, cfg.split);
      if (cfg.data_fraction < 1.0)
        for (auto& [id, ds] : out) ds = retain_sequence_fraction(ds, cfg.data_fraction, cfg.fraction_mode);
      return out;
    });

    // 2. Disturbance synthesis
    std::map<Scenario, SequenceMap> by_scenario = stages.run("disturb", [&] {
      std::map<Scenario, SequenceMap> out;
      std::vector<Scenario> needed = cfg.scenarios;
      if (cfg.dehaze.mode != DehazeMode::off)
        for (Scenario s : pair_scenarios(cfg))
          if (std::find(needed.begin(), needed.end(), s) == needed.end()) needed.push_back(s);
      for (Scenario s : needed) {
        for (const auto& [id, ds] : clean) {
          if (s == Scenario::original || ds.scenario != Scenario::original) {
            if (ds.scenario != s)
              throw ValidationError(fmt::format("sequence {} is tagged {}, cannot produce {}", id,
                                                to_string(ds.scenario), to_string(s)),
                                    0);
            out[s].emplace(id, ds);
            continue;
          }
          SequenceDataset d = disturb_sequence(ds, s, cfg.turbidity, cfg.distortion);
          if (cfg.synthetic.enabled) save_sequence(d, data_dir / std::string(to_string(s)) / id);
          out[s].emplace(id, std::move(d));
        }
      }
      return out;
    });

    // 3. Dehazer
    std::unique_ptr<Generator> dehazer;
    if (cfg.dehaze.mode != DehazeMode::off) {
      dehazer = stages.run("dehaze-train", [&] {
        if (!cfg.dehaze.weights.empty())
          return std::make_unique<Generator>(load_dehazer(cfg.dehaze.weights).generator);
        const auto pairs = make_pairs(clean, by_scenario, cfg.split.train, pair_scenarios(cfg),
                                      cfg.dehaze.generator, cfg.dehaze.max_pairs);
        stages.note(fmt::format("  {} training pairs", pairs.size()));
        auto trained = train_dehazer(pairs, cfg.dehaze.generator, cfg.dehaze.discriminator,
                                     cfg.dehaze.train, [&](const DehazeEpochLog& e) {
                                       stages.note(fmt::format("  epoch {} gen {:.4f} disc {:.4f} l1 {:.5f} val_psnr {:.2f}",
                                                               e.epoch, e.generator_loss, e.discriminator_loss,
                                                               e.reconstruction_loss, e.val_psnr));
                                     });
        save_dehazer(model_dir / "dehazer.bin", trained.model);
        std::ofstream(log_dir / "dehaze_train.json") << to_json(trained.log).dump(2) << '\n';
        return std::make_unique<Generator>(std::move(trained.model.generator));
      });
      stages.run("dehaze-eval", [&] {
        json rows = json::array();
        for (Scenario s : pair_scenarios(cfg)) {
          const auto pairs = make_pairs(clean, by_scenario, cfg.split.test, {s}, dehazer->config(), 0);
          const DehazeEvaluation ev = evaluate_dehazer(*dehazer, pairs);
          rows.push_back({{"scenario", std::string(to_string(s))},
                          {"backbone", std::string(to_string(dehazer->config().backbone))},
                          {"pairs", ev.pairs},
                          {"dehazed", {{"psnr", ev.psnr_dehazed}, {"ssim", ev.ssim_dehazed},
                                       {"mse", ev.mse_dehazed}, {"rmse", ev.rmse_dehazed}}},
                          {"input", {{"psnr", ev.psnr_hazy}, {"ssim", ev.ssim_hazy},
                                     {"mse", ev.mse_hazy}, {"rmse", ev.rmse_hazy}}}});
          stages.note(fmt::format("  {}: PSNR {:.2f} dB -> {:.2f} dB", to_string(s), ev.psnr_hazy,
                                  ev.psnr_dehazed));
        }
        std::ofstream(cfg.output_dir / "dehaze_eval.json") << json{{"rows", rows}}.dump(2) << '\n';
      });
    }

    // 4. VIO per scenario and dehazing variant
    std::vector<bool> variants;
    if (cfg.dehaze.mode != DehazeMode::on) variants.push_back(false);
    if (cfg.dehaze.mode != DehazeMode::off) variants.push_back(true);
    const auto probe = make_probe(cfg.hardware);
    json hardware = json::array();
    for (Scenario s : cfg.scenarios) {
      for (bool dehazed : variants) {
        const std::string tag = fmt::format("{}_{}", to_string(s), dehazed ? "dehazed" : "raw");
        const Generator* gen = dehazed ? dehazer.get() : nullptr;
        const SequenceMap& seqs = by_scenario.at(s);
        VioTrainResult trained = stages.run("vio-train:" + tag, [&] {
          const auto train = prepare_windows(pick(seqs, cfg.split.train), cfg.vio, gen);
          const auto val = prepare_windows(pick(seqs, cfg.split.val), cfg.vio, gen);
          Generator* mutable_gen = (gen && cfg.vio.joint_dehaze_finetune) ? dehazer.get() : nullptr;
          auto r = train_vio(train, val, cfg.vio, mutable_gen,
                             [&](const VioEpochLog& e) {
                               stages.note(fmt::format("  epoch {} train {:.6f} val {:.6f}", e.epoch,
                                                       e.train_loss, e.val_loss));
                             });
          save_vio(model_dir / fmt::format("vio_{}.bin", tag), r.net);
          std::ofstream(log_dir / fmt::format("vio_train_{}.json", tag)) << to_json(r).dump(2) << '\n';
          return r;
        });
        stages.run("vio-infer:" + tag, [&] {
          for (const auto& id : cfg.split.test) {
            const SequenceDataset& ds = seqs.at(id);
            std::vector<PoseDelta> pred;
            const HardwareMetrics hw = capture_hardware_metrics(
                [&] { pred = infer_sequence(ds, trained.net, gen); }, probe.get());
            json hw_json = to_json(hw);
            hw_json["sequence_id"] = id;
            hw_json["variant"] = tag;
            hardware.push_back(hw_json);
            write_deltas_csv(pred_dir / fmt::format("{}_{}.csv", id, tag), pred);
            const auto ref = reference_deltas(ds);
            for (auto& r : score_sequence(id, s, dehazed, pred, ref)) {
              if (cfg.rmse.mode != RmseMode::pooled || cfg.rmse.geodesic_rotation) {
                const auto parts_p = split_three(pred);
                const auto parts_r = split_three(ref);
                const RmsePair alt = compute_rmse(parts_p[r.sub_sequence_index - 1],
                                                  parts_r[r.sub_sequence_index - 1], cfg.rmse);
                r.v_rmse = alt.v_rmse;
                r.phi_rmse = alt.phi_rmse;
              }
              result.reports.push_back(r);
            }
          }
        });
      }
    }

    // 5. Reports
    stages.run("report", [&] {
      render_reports(result.reports, reference_baselines(), cfg.output_dir);
      std::ofstream(cfg.output_dir / "hardware.json") << json{{"runs", hardware}}.dump(2) << '\n';
    });
  } catch (...) {
    write_provenance();
    throw;
  }
  write_provenance();
  result.provenance = provenance;
  return result;
}

}  // namespace duvio
