#include "duvio/dehaze/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/dataio/split.hpp"
#include "duvio/dehaze/metrics.hpp"
#include "duvio/nn/optim.hpp"

namespace duvio {

using nn::Var;

std::vector<std::string> DehazeTrainConfig::problems() const {
  std::vector<std::string> out;
  if (epochs < 1) out.push_back("dehaze_cfg.train.epochs must be >= 1");
  if (!(data_fraction > 0.0 && data_fraction <= 1.0))
    out.push_back(fmt::format("dehaze_cfg.train.data_fraction must be in (0,1] (got {})", data_fraction));
  if (batch < 1) out.push_back("dehaze_cfg.train.batch must be >= 1");
  if (!(lr > 0.0)) out.push_back("dehaze_cfg.train.lr must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    out.push_back("dehaze_cfg.train.beta1/beta2 must be in [0,1)");
  if (lambda_l1 < 0.0) out.push_back("dehaze_cfg.train.lambda_l1 must be >= 0");
  return out;
}

nlohmann::json to_json(const DehazeTrainConfig& cfg) {
  return {{"epochs", cfg.epochs}, {"data_fraction", cfg.data_fraction},
          {"batch", cfg.batch},   {"lr", cfg.lr},
          {"beta1", cfg.beta1},   {"beta2", cfg.beta2},
          {"lambda_l1", cfg.lambda_l1}, {"adversarial", cfg.adversarial},
          {"seed", cfg.seed}};
}

DehazeTrainConfig dehaze_train_config_from_json(const nlohmann::json& j) {
  DehazeTrainConfig cfg;
  cfg.epochs = j.at("epochs").get<std::size_t>();
  cfg.data_fraction = j.at("data_fraction").get<double>();
  cfg.batch = j.at("batch").get<std::size_t>();
  cfg.lr = j.at("lr").get<double>();
  cfg.beta1 = j.at("beta1").get<double>();
  cfg.beta2 = j.at("beta2").get<double>();
  cfg.lambda_l1 = j.at("lambda_l1").get<double>();
  cfg.adversarial = j.at("adversarial").get<bool>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

nlohmann::json to_json(const std::vector<DehazeEpochLog>& log) {
  auto out = nlohmann::json::array();
  for (const auto& e : log) {
    out.push_back({{"epoch", e.epoch},
                   {"generator_loss", e.generator_loss},
                   {"discriminator_loss", e.discriminator_loss},
                   {"reconstruction_loss", e.reconstruction_loss},
                   {"val_psnr", e.val_psnr},
                   {"val_ssim", e.val_ssim}});
  }
  return out;
}

Var generator_loss(Discriminator& disc, const Var& fake, const Var& clean, double lambda_l1,
                   bool adversarial, bool training) {
  Var loss = nn::scale(nn::l1_loss(fake, clean), lambda_l1);
  if (adversarial) loss = nn::add(loss, nn::bce_with_logits(disc.forward(fake, training), 1.0));
  return loss;
}

namespace {

double capped_psnr(double psnr) { return std::min(psnr, kPsnrTextCap); }

}  // namespace

DehazeEvaluation evaluate_dehazer(const Generator& gen, const std::vector<ImagePair>& pairs) {
  DehazeEvaluation ev;
  ev.pairs = pairs.size();
  if (pairs.empty()) return ev;
  for (const auto& p : pairs) {
    const auto d = image_metrics(p.clean, gen.generate(p.hazy));
    const auto h = image_metrics(p.clean, p.hazy);
    ev.psnr_dehazed += capped_psnr(d.psnr);
    ev.ssim_dehazed += d.ssim;
    ev.mse_dehazed += d.mse;
    ev.psnr_hazy += capped_psnr(h.psnr);
    ev.ssim_hazy += h.ssim;
    ev.mse_hazy += h.mse;
  }
  const auto n = static_cast<double>(pairs.size());
  ev.psnr_dehazed /= n;
  ev.ssim_dehazed /= n;
  ev.mse_dehazed /= n;
  ev.rmse_dehazed = std::sqrt(ev.mse_dehazed);
  ev.psnr_hazy /= n;
  ev.ssim_hazy /= n;
  ev.mse_hazy /= n;
  ev.rmse_hazy = std::sqrt(ev.mse_hazy);
  return ev;
}

DehazeTrainResult train_dehazer(const std::vector<ImagePair>& pairs, const GeneratorConfig& gen_cfg,
                                const DiscriminatorConfig& disc_cfg,
                                const DehazeTrainConfig& cfg, const DehazeProgress& progress) {
  if (pairs.empty()) throw ValidationError("train_dehazer: no image pairs", 0);
  if (auto p = cfg.problems(); !p.empty()) throw ConfigError(std::move(p));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (!p.hazy.same_shape(p.clean) || p.hazy.width() != gen_cfg.width ||
        p.hazy.height() != gen_cfg.height) {
      throw ValidationError(fmt::format("train_dehazer: pair {} is not {}x{}", i, gen_cfg.width,
                                        gen_cfg.height),
                            i);
    }
  }

  DehazeTrainResult result{{Generator(gen_cfg), Discriminator(disc_cfg, gen_cfg.width, gen_cfg.height)},
                           {}, 0, 0};
  Generator& gen = result.model.generator;
  Discriminator& disc = result.model.discriminator;

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t n_train = std::max<std::size_t>(1, retained_count(pairs.size(), cfg.data_fraction));
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<long>(n_train));
  std::vector<ImagePair> val;
  for (std::size_t i = n_train; i < order.size(); ++i) val.push_back(pairs[order[i]]);
  if (val.empty())
    for (std::size_t i : train_idx) val.push_back(pairs[i]);
  result.train_pairs = train_idx.size();
  result.val_pairs = pairs.size() - n_train;

  const nn::AdamOptions opts{cfg.lr, cfg.beta1, cfg.beta2, 1e-8};
  nn::Adam opt_g(gen.params().trainable(), opts);
  nn::Adam opt_d(disc.params().trainable(), opts);

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    DehazeEpochLog log;
    log.epoch = epoch;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch) {
      const std::size_t end = std::min(train_idx.size(), start + cfg.batch);
      std::vector<const Image*> hazy, clean;
      for (std::size_t i = start; i < end; ++i) {
        hazy.push_back(&pairs[train_idx[i]].hazy);
        clean.push_back(&pairs[train_idx[i]].clean);
      }
      const Var x(images_to_batch(hazy));
      const Var y(images_to_batch(clean));
      const Var fake = gen.forward(x);

      if (cfg.adversarial) {
        opt_d.zero_grad();
        const Var d_real = nn::bce_with_logits(disc.forward(y, true), 1.0);
        const Var d_fake = nn::bce_with_logits(disc.forward(fake.detach(), true), 0.0);
        const Var d_loss = nn::scale(nn::add(d_real, d_fake), 0.5);
        d_loss.backward();
        opt_d.step();
        log.discriminator_loss += d_loss.item();
      }

      opt_g.zero_grad();
      const Var recon = nn::l1_loss(fake, y);
      Var g_loss = nn::scale(recon, cfg.lambda_l1);
      if (cfg.adversarial)
        g_loss = nn::add(g_loss, nn::bce_with_logits(disc.forward(fake, true), 1.0));
      g_loss.backward();
      opt_g.step();
      disc.params().zero_grad();
      log.generator_loss += g_loss.item();
      log.reconstruction_loss += recon.item();
      ++batches;
    }
    const auto nb = static_cast<double>(batches);
    log.generator_loss /= nb;
    log.discriminator_loss /= nb;
    log.reconstruction_loss /= nb;
    const auto ev = evaluate_dehazer(gen, val);
    log.val_psnr = ev.psnr_dehazed;
    log.val_ssim = ev.ssim_dehazed;
    result.log.push_back(log);
    if (progress) progress(log);
  }
  return result;
}

}  // namespace duvio
