#pragma once

#include <filesystem>

#include "duvio/dehaze/train.hpp"

namespace duvio {

// Generator and discriminator in one weights container; the header carries
// both configs so a model can be rebuilt without other inputs.
void save_dehazer(const std::filesystem::path& path, const DehazeModel& model);
DehazeModel load_dehazer(const std::filesystem::path& path);

}  // namespace duvio
