#pragma once

#include <filesystem>

#include "duvio/core/image.hpp"

namespace duvio {

// 8-bit grayscale PNG. Colour inputs are converted to luminance by libpng.
Image read_png_gray(const std::filesystem::path& path);

// Values are clamped to [0,1] and rounded to the nearest 8-bit level.
void write_png_gray(const std::filesystem::path& path, const Image& image);

// RGB writer used for report charts; `rgb` is width*height*3 bytes.
void write_png_rgb(const std::filesystem::path& path, std::size_t width, std::size_t height,
                   const std::vector<unsigned char>& rgb);

}  // namespace duvio
