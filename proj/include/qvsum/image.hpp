#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace qvsum {

// 8-bit RGB raster, interleaved, row-major.
struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // 3 * width * height

  RgbImage() = default;
  RgbImage(std::size_t w, std::size_t h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(3 * w * h, fill) {}

  std::size_t area() const { return width * height; }
  bool empty() const { return area() == 0; }

  std::uint8_t* at(std::size_t x, std::size_t y) { return &pixels[3 * (y * width + x)]; }
  const std::uint8_t* at(std::size_t x, std::size_t y) const {
    return &pixels[3 * (y * width + x)];
  }
};

// 8-bit single-channel raster.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;
};

// Reads PPM (P3/P6), PGM (P2/P5, expanded to gray RGB) or PNG. Dispatches on
// the file signature, not the extension. Throws InputError.
RgbImage read_image(const std::filesystem::path& path);

GrayImage read_pgm(const std::filesystem::path& path);

void write_ppm(const std::filesystem::path& path, const RgbImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

}  // namespace qvsum
