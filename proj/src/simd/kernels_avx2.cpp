// Compiled with -mavx2 -mfma; only reached after the dispatcher has checked
// the CPU flags.
#include <immintrin.h>

#include <bit>

#include "qvsum/simd/kernels.hpp"

namespace qvsum::simd::avx2 {
namespace {

inline double hsum(__m256d x) {
  const __m128d lo = _mm256_castpd256_pd128(x);
  const __m128d hi = _mm256_extractf128_pd(x, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  if (k + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    k += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void matvec(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot(a + i * n, x, n);
}

void sv_planes(const std::uint8_t* rgb, double* s, double* v, std::size_t pixels) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d full = _mm256_set1_pd(255.0);
  std::size_t p = 0;
  for (; p + 4 <= pixels; p += 4) {
    const std::uint8_t* px = rgb + 3 * p;
    const __m128i r = _mm_setr_epi32(px[0], px[3], px[6], px[9]);
    const __m128i g = _mm_setr_epi32(px[1], px[4], px[7], px[10]);
    const __m128i b = _mm_setr_epi32(px[2], px[5], px[8], px[11]);
    const __m256d mx = _mm256_cvtepi32_pd(_mm_max_epi32(_mm_max_epi32(r, g), b));
    const __m256d mn = _mm256_cvtepi32_pd(_mm_min_epi32(_mm_min_epi32(r, g), b));
    const __m256d black = _mm256_cmp_pd(mx, zero, _CMP_EQ_OQ);
    const __m256d sat = _mm256_sub_pd(one, _mm256_div_pd(mn, mx));
    _mm256_storeu_pd(s + p, _mm256_blendv_pd(sat, zero, black));
    _mm256_storeu_pd(v + p, _mm256_div_pd(mx, full));
  }
  if (p < pixels) scalar::table().sv_planes(rgb + 3 * p, s + p, v + p, pixels - p);
}

void salient_threshold(const double* s, const double* v, double limit, std::uint8_t* mask,
                       std::size_t pixels) {
  const __m256d lim = _mm256_set1_pd(limit);
  std::size_t p = 0;
  for (; p + 4 <= pixels; p += 4) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(v + p), _mm256_loadu_pd(s + p));
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(diff, lim, _CMP_LT_OQ));
    mask[p] = bits & 1;
    mask[p + 1] = (bits >> 1) & 1;
    mask[p + 2] = (bits >> 2) & 1;
    mask[p + 3] = (bits >> 3) & 1;
  }
  for (; p < pixels; ++p) mask[p] = (v[p] - s[p]) < limit ? 1 : 0;
}

std::size_t count_mismatch(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t count = 0;
  std::size_t k = 0;
  for (; k + 32 <= n; k += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + k));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + k));
    const auto equal = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
    count += static_cast<std::size_t>(std::popcount(~equal));
  }
  for (; k < n; ++k) count += (a[k] != b[k]);
  return count;
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{Backend::avx2, dot, matvec, sv_planes, salient_threshold,
                             count_mismatch};
  return t;
}

}  // namespace qvsum::simd::avx2
