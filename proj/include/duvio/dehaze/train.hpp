#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "duvio/core/image.hpp"
#include "duvio/dehaze/discriminator.hpp"
#include "duvio/dehaze/generator.hpp"

namespace duvio {

struct ImagePair {
  Image hazy;
  Image clean;
};

struct DehazeTrainConfig {
  std::size_t epochs = 50;
  double data_fraction = 0.8;
  std::size_t batch = 4;
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double lambda_l1 = 100.0;
  // Off: pure L1 training, the discriminator is left untouched.
  bool adversarial = true;
  std::uint64_t seed = 3;

  std::vector<std::string> problems() const;
};

nlohmann::json to_json(const DehazeTrainConfig& cfg);
DehazeTrainConfig dehaze_train_config_from_json(const nlohmann::json& j);

struct DehazeEpochLog {
  std::size_t epoch = 0;
  double generator_loss = 0.0;
  double discriminator_loss = 0.0;
  double reconstruction_loss = 0.0;  // mean L1, [0,1] scale
  double val_psnr = 0.0;
  double val_ssim = 0.0;
};

struct DehazeModel {
  Generator generator;
  Discriminator discriminator;
};

struct DehazeTrainResult {
  DehazeModel model;
  std::vector<DehazeEpochLog> log;
  std::size_t train_pairs = 0;
  std::size_t val_pairs = 0;
};

nlohmann::json to_json(const std::vector<DehazeEpochLog>& log);

// Non-saturating adversarial term plus lambda * L1 against the clean target.
nn::Var generator_loss(Discriminator& disc, const nn::Var& fake, const nn::Var& clean,
                       double lambda_l1, bool adversarial, bool training = true);

using DehazeProgress = std::function<void(const DehazeEpochLog&)>;

// Pairs are shuffled with the seed, then the leading data_fraction is used for
// training and the rest for validation (training pairs when none remain).
DehazeTrainResult train_dehazer(const std::vector<ImagePair>& pairs, const GeneratorConfig& gen_cfg,
                                const DiscriminatorConfig& disc_cfg,
                                const DehazeTrainConfig& train_cfg,
                                const DehazeProgress& progress = {});

// Mean metrics of generate(hazy) and of the untouched hazy input, both
// against clean.
struct DehazeEvaluation {
  std::size_t pairs = 0;
  double psnr_dehazed = 0.0;
  double ssim_dehazed = 0.0;
  double mse_dehazed = 0.0;
  double rmse_dehazed = 0.0;
  double psnr_hazy = 0.0;
  double ssim_hazy = 0.0;
  double mse_hazy = 0.0;
  double rmse_hazy = 0.0;
};

DehazeEvaluation evaluate_dehazer(const Generator& gen, const std::vector<ImagePair>& pairs);

}  // namespace duvio
