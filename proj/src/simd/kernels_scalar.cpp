#include "qvsum/simd/kernels.hpp"

#include <algorithm>

namespace qvsum::simd::scalar {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void matvec(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot(a + i * n, x, n);
}

void sv_planes(const std::uint8_t* rgb, double* s, double* v, std::size_t pixels) {
  for (std::size_t p = 0; p < pixels; ++p) {
    const int r = rgb[3 * p], g = rgb[3 * p + 1], b = rgb[3 * p + 2];
    const int mx = std::max({r, g, b});
    const int mn = std::min({r, g, b});
    s[p] = mx == 0 ? 0.0 : 1.0 - static_cast<double>(mn) / static_cast<double>(mx);
    v[p] = static_cast<double>(mx) / 255.0;
  }
}

void salient_threshold(const double* s, const double* v, double limit, std::uint8_t* mask,
                       std::size_t pixels) {
  for (std::size_t p = 0; p < pixels; ++p) mask[p] = (v[p] - s[p]) < limit ? 1 : 0;
}

std::size_t count_mismatch(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t k = 0; k < n; ++k) count += (a[k] != b[k]);
  return count;
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{Backend::scalar, dot, matvec, sv_planes, salient_threshold,
                             count_mismatch};
  return t;
}

}  // namespace qvsum::simd::scalar
