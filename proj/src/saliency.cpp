#include "qvsum/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qvsum/error.hpp"
#include "qvsum/simd/kernels.hpp"

namespace qvsum::saliency {

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("saliency alpha must lie in (0,1), got " + std::to_string(alpha));
  }
}

std::size_t SaliencyMask::salient_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

HsvPlanes hsv_planes(const RgbImage& frame) {
  if (frame.empty()) throw DimensionError("hsv_planes: zero-area frame");
  if (frame.pixels.size() != 3 * frame.area()) {
    throw DimensionError("hsv_planes: pixel buffer does not match frame size");
  }
  HsvPlanes out{frame.width, frame.height, std::vector<double>(frame.area()),
                std::vector<double>(frame.area())};
  simd::kernels().sv_planes(frame.pixels.data(), out.s.data(), out.v.data(), frame.area());
  return out;
}

HsvPlanes make_planes(std::size_t width, std::size_t height, std::vector<double> s,
                      std::vector<double> v) {
  const std::size_t n = width * height;
  if (n == 0) throw DimensionError("make_planes: zero-area planes");
  if (s.size() != n || v.size() != n) throw DimensionError("make_planes: plane size mismatch");
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!std::all_of(s.begin(), s.end(), in_unit) || !std::all_of(v.begin(), v.end(), in_unit)) {
    throw InputError("make_planes: plane entries must lie in [0,1]");
  }
  return HsvPlanes{width, height, std::move(s), std::move(v)};
}

SaliencyMask salient_mask(const HsvPlanes& planes, double alpha) {
  validate_alpha(alpha);
  const std::size_t n = planes.width * planes.height;
  if (n == 0) throw DimensionError("salient_mask: zero-area planes");
  if (planes.s.size() != n || planes.v.size() != n) {
    throw DimensionError("salient_mask: plane size mismatch");
  }
  SaliencyMask out{planes.width, planes.height, std::vector<std::uint8_t>(n), alpha};
  simd::kernels().salient_threshold(planes.s.data(), planes.v.data(), -std::log(alpha),
                                    out.mask.data(), n);
  return out;
}

SaliencyMask resample(const SaliencyMask& m, std::size_t width, std::size_t height) {
  if (m.area() == 0 || m.mask.size() != m.area()) {
    throw DimensionError("resample: zero-area or inconsistent mask");
  }
  if (width == 0 || height == 0) throw DimensionError("resample: zero-area target");
  if (width == m.width && height == m.height) return m;

  // Pixel-centre mapping: source index = floor((dst + 0.5) * src / dst_size).
  std::vector<std::size_t> col(width);
  for (std::size_t x = 0; x < width; ++x) col[x] = ((2 * x + 1) * m.width) / (2 * width);
  SaliencyMask out{width, height, std::vector<std::uint8_t>(width * height), m.alpha};
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t sy = ((2 * y + 1) * m.height) / (2 * height);
    const std::uint8_t* src = &m.mask[sy * m.width];
    std::uint8_t* dst = &out.mask[y * width];
    for (std::size_t x = 0; x < width; ++x) dst[x] = src[col[x]];
  }
  return out;
}

double mask_difference(const SaliencyMask& a, const SaliencyMask& b) {
  if (a.area() == 0 || b.area() == 0) throw DimensionError("mask_difference: zero-area mask");
  const SaliencyMask ra = resample(a, kCompareSize, kCompareSize);
  const SaliencyMask rb = resample(b, kCompareSize, kCompareSize);
  const std::size_t n = kCompareSize * kCompareSize;
  const std::size_t diff = simd::kernels().count_mismatch(ra.mask.data(), rb.mask.data(), n);
  return static_cast<double>(diff) / static_cast<double>(n);
}

GrayImage to_gray(const SaliencyMask& m) {
  GrayImage g{m.width, m.height, std::vector<std::uint8_t>(m.mask.size())};
  for (std::size_t p = 0; p < m.mask.size(); ++p) g.pixels[p] = m.mask[p] ? 255 : 0;
  return g;
}

SaliencyMask from_gray(const GrayImage& g, double alpha) {
  if (g.width * g.height == 0) throw DimensionError("from_gray: zero-area mask image");
  SaliencyMask m{g.width, g.height, std::vector<std::uint8_t>(g.pixels.size()), alpha};
  for (std::size_t p = 0; p < g.pixels.size(); ++p) m.mask[p] = g.pixels[p] >= 128 ? 1 : 0;
  return m;
}

}  // namespace qvsum::saliency
