#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "duvio/core/error.hpp"
#include "duvio/pipeline/config.hpp"
#include "duvio/pipeline/pipeline.hpp"

using namespace duvio;
namespace fs = std::filesystem;

namespace {

std::string joined(const ConfigError& e) {
  std::string s;
  for (const auto& i : e.issues()) s += i + "\n";
  return s;
}

}  // namespace

TEST(Config, EmptyIsDefaults) {
  const ExperimentConfig c = parse_config("");
  EXPECT_EQ(c.vio.batch, 16u);
  EXPECT_DOUBLE_EQ(c.vio.lr, 1e-6);
  EXPECT_EQ(c.vio.epochs, 20u);
  EXPECT_EQ(c.dehaze.train.epochs, 50u);
  EXPECT_DOUBLE_EQ(c.dehaze.train.data_fraction, 0.8);
  EXPECT_EQ(c.scenarios, std::vector<Scenario>{Scenario::original});
}

TEST(Config, UnknownScenarioNamesAllowedValues) {
  try {
    parse_config("scenario: foggy\n");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string s = joined(e);
    EXPECT_NE(s.find("foggy"), std::string::npos);
    EXPECT_NE(s.find("turbid"), std::string::npos);
  }
}

TEST(Config, ViolationsAggregated) {
  try {
    parse_config("vio:\n  batch: 0\n  lr: -1\nseed: abc\nbogus_key: 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_GE(e.issues().size(), 4u) << joined(e);
  }
}

TEST(Config, MissingDatasetRootReported) {
  const fs::path p = fs::temp_directory_path() / "duvio_test_cfg.yaml";
  std::ofstream(p) << "dataset_root: /nonexistent/duvio\n";
  EXPECT_THROW(validate_config(p), ConfigError);
}

TEST(Config, SyntheticSectionParsed) {
  const ExperimentConfig c = parse_config(
      "split: {train: [a], val: [], test: [b]}\n"
      "synthetic:\n  sequences:\n    - {id: a, trajectory: circle}\n    - {id: b, speed: 0.3}\n"
      "  width: 32\n  height: 16\n");
  EXPECT_TRUE(c.synthetic.enabled);
  ASSERT_EQ(c.synthetic.sequences.size(), 2u);
  EXPECT_EQ(c.synthetic.sequences[0].trajectory, TrajectoryKind::circle);
  EXPECT_EQ(c.synthetic.sequences[1].speed, 0.3);
  EXPECT_EQ(c.dehaze.generator.width, 32u);
}

TEST(Config, YamlQuotedScalarsStayStrings) {
  const auto j = yaml_to_json("a: '12'\nb: 12\nc: 1.5\nd: yes\ne: [1, x]\n");
  EXPECT_TRUE(j["a"].is_string());
  EXPECT_TRUE(j["b"].is_number_integer());
  EXPECT_TRUE(j["c"].is_number_float());
  EXPECT_TRUE(j["d"].is_boolean());
  EXPECT_TRUE(j["e"][1].is_string());
}

TEST(Config, SeedDerivation) {
  ExperimentConfig c;
  apply_seed(c, 100);
  EXPECT_EQ(c.seed, 100u);
  EXPECT_EQ(c.vio.seed, 117u);
  EXPECT_NE(c.dehaze.generator.seed, c.dehaze.discriminator.seed);
}

TEST(Pipeline, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Pipeline, ProbeFactory) {
  HardwareSettings none;
  EXPECT_EQ(make_probe(none), nullptr);
  HardwareSettings stub;
  stub.probe = "stub";
  stub.stub_power = 47.41;
  auto p = make_probe(stub);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->power_w(), 47.41);
  EXPECT_FALSE(p->temperature_c());
}

TEST(Pipeline, UndehazedAblationEndToEnd) {
  const fs::path out = fs::temp_directory_path() / "duvio_test_pipeline";
  fs::remove_all(out);
  const std::string yaml =
      "output_dir: " + out.string() + "\n"
      "dehaze: false\n"
      "split: {train: [a], val: [], test: [b]}\n"
      "synthetic:\n  duration: 0.8\n  width: 32\n  height: 16\n"
      "  sequences: [{id: a}, {id: b}]\n"
      "vio: {image_width: 32, image_height: 16, conv_base: 4, visual_feature: 8, inertial_channels: 8,"
      " inertial_feature: 8, lstm_layers: 1, lstm_hidden: 8, mlp_hidden: 8, epochs: 1, batch: 1,"
      " seq_len: 4, lr: 0.001}\n";
  const auto result = run_pipeline(parse_config(yaml), yaml);
  ASSERT_EQ(result.reports.size(), 3u);
  for (const auto& r : result.reports) EXPECT_FALSE(r.dehazed);
  for (const char* f : {"report.json", "report.txt", "provenance.json", "hardware.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  std::ifstream in(out / "provenance.json");
  const auto prov = nlohmann::json::parse(in);
  EXPECT_EQ(prov.at("config_sha256"), sha256_hex(yaml));
  EXPECT_EQ(prov.at("seed"), 42);
}

TEST(Pipeline, StageFailureNamesStage) {
  ExperimentConfig c;
  c.dataset_root = "/nonexistent/duvio";
  c.output_dir = fs::temp_directory_path() / "duvio_test_fail";
  try {
    run_pipeline(c, "");
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "data");
  }
}
