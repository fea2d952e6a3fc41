#include "duvio/core/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "duvio/core/error.hpp"

namespace duvio {

Image read_png_gray(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw LoadError(path.string(), std::string("cannot read PNG (") + img.message + ")");
  }
  img.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&img);
    throw LoadError(path.string(), std::string("cannot decode PNG (") + img.message + ")");
  }
  std::vector<double> pixels(buffer.size());
  std::transform(buffer.begin(), buffer.end(), pixels.begin(),
                 [](png_byte b) { return static_cast<double>(b) / 255.0; });
  return Image(img.width, img.height, std::move(pixels));
}

void write_png_gray(const std::filesystem::path& path, const Image& image) {
  std::vector<png_byte> buffer(image.size());
  std::transform(image.pixels().begin(), image.pixels().end(), buffer.begin(), [](double v) {
    return static_cast<png_byte>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  });
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&img, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    throw LoadError(path.string(), std::string("cannot write PNG (") + img.message + ")");
  }
}

void write_png_rgb(const std::filesystem::path& path, std::size_t width, std::size_t height,
                   const std::vector<unsigned char>& rgb) {
  if (rgb.size() != width * height * 3) throw ShapeError("RGB buffer size mismatch");
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(width);
  img.height = static_cast<png_uint_32>(height);
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.c_str(), 0, rgb.data(), 0, nullptr)) {
    throw LoadError(path.string(), std::string("cannot write PNG (") + img.message + ")");
  }
}

}  // namespace duvio
