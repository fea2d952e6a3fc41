#include "duvio/dehaze/weights.hpp"

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/nn/weights_file.hpp"

namespace duvio {

namespace {

constexpr const char* kKind = "dehazer";

nn::ParamSet combined(const DehazeModel& model) {
  nn::ParamSet set;
  for (const auto& e : model.generator.params().entries())
    set.add("generator." + e.name, e.var, e.trainable);
  for (const auto& e : model.discriminator.params().entries())
    set.add("discriminator." + e.name, e.var, e.trainable);
  return set;
}

}  // namespace

void save_dehazer(const std::filesystem::path& path, const DehazeModel& model) {
  const nlohmann::json meta{{"kind", kKind},
                            {"generator", to_json(model.generator.config())},
                            {"discriminator", to_json(model.discriminator.config())}};
  nn::write_weights(path, meta, combined(model));
}

DehazeModel load_dehazer(const std::filesystem::path& path) {
  const nn::WeightsFile file = nn::read_weights(path);
  if (file.meta.value("kind", "") != kKind)
    throw LoadError(path.string(), "not a dehazer weights file");
  try {
    const GeneratorConfig gen_cfg = generator_config_from_json(file.meta.at("generator"));
    DehazeModel model{Generator(gen_cfg),
                      Discriminator(discriminator_config_from_json(file.meta.at("discriminator")),
                                    gen_cfg.width, gen_cfg.height)};
    combined(model).assign(file.tensors);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path.string(), fmt::format("malformed dehazer header ({})", e.what()));
  }
}

}  // namespace duvio
