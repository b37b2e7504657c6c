#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace qvsum::simd {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b);

// Function table for the data-parallel inner loops. Every backend computes
// the same quantity; the exact kernels (sv_planes, salient_threshold,
// count_mismatch) are bit-identical across backends, the floating-point
// reductions (dot, matvec) agree to rounding.
struct KernelTable {
  Backend backend;

  // sum_k a[k] * b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // y = A x with A an n x n row-major matrix.
  void (*matvec)(const double* a, const double* x, double* y, std::size_t n);

  // Interleaved 8-bit RGB -> HSV saturation and value planes.
  void (*sv_planes)(const std::uint8_t* rgb, double* s, double* v, std::size_t pixels);

  // mask[p] = (v[p] - s[p]) < limit ? 1 : 0
  void (*salient_threshold)(const double* s, const double* v, double limit,
                            std::uint8_t* mask, std::size_t pixels);

  // Number of positions where the 0/1 bytes differ.
  std::size_t (*count_mismatch)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
};

// Kernels picked once per process: the best backend the CPU supports, unless
// QVSUM_SIMD=scalar|avx2 requests otherwise.
const KernelTable& kernels();

// Backends compiled in and supported by this CPU. Always contains scalar.
std::vector<Backend> available_backends();

// Throws ConfigError if the backend is not available.
const KernelTable& kernels_for(Backend b);

namespace scalar {
const KernelTable& table();
}

}  // namespace qvsum::simd
