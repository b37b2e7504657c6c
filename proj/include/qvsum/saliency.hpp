#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qvsum/image.hpp"

namespace qvsum::saliency {

inline constexpr double kDefaultAlpha = 0.7;

// Masks are compared at this fixed resolution so the difference score does
// not depend on the source frame sizes.
inline constexpr std::size_t kCompareSize = 256;

// Saturation and value planes of an RGB frame, both in [0,1]. Hue is never
// needed and never computed.
struct HsvPlanes {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> s;
  std::vector<double> v;
};

struct SaliencyMask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> mask;  // 1 = salient
  double alpha = kDefaultAlpha;

  std::size_t area() const { return width * height; }
  std::size_t salient_count() const;
};

// S = 1 - min/max (0 for black), V = max/255.
HsvPlanes hsv_planes(const RgbImage& frame);

// Builds planes from explicit values; throws DimensionError on size mismatch
// and InputError on entries outside [0,1].
HsvPlanes make_planes(std::size_t width, std::size_t height, std::vector<double> s,
                      std::vector<double> v);

// Pixel p is salient when exp(-(V - S)) > alpha, evaluated as the equivalent
// V - S < -ln(alpha).
SaliencyMask salient_mask(const HsvPlanes& planes, double alpha = kDefaultAlpha);

// Nearest-neighbour resample to width x height.
SaliencyMask resample(const SaliencyMask& m, std::size_t width, std::size_t height);

// Fraction of disagreeing pixels after resampling both masks to
// kCompareSize x kCompareSize. Symmetric, in [0,1], zero for identical masks.
double mask_difference(const SaliencyMask& a, const SaliencyMask& b);

// 0/255 gray image for debugging output, and the inverse (>= 128 is salient).
GrayImage to_gray(const SaliencyMask& m);
SaliencyMask from_gray(const GrayImage& g, double alpha = kDefaultAlpha);

void validate_alpha(double alpha);

}  // namespace qvsum::saliency
