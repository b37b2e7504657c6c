#include <cstdlib>
#include <string>

#include "qvsum/error.hpp"
#include "qvsum/simd/kernels.hpp"

namespace qvsum::simd {

#if defined(QVSUM_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(QVSUM_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select_default() {
  if (const char* env = std::getenv("QVSUM_SIMD"); env != nullptr && *env != '\0') {
    const std::string want(env);
    if (want == "scalar") return scalar::table();
    if (want == "avx2") return kernels_for(Backend::avx2);
    throw ConfigError("QVSUM_SIMD must be 'scalar' or 'avx2', got '" + want + "'");
  }
  if (cpu_has_avx2()) return kernels_for(Backend::avx2);
  return scalar::table();
}

}  // namespace

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable& kernels() {
  static const KernelTable& active = select_default();
  return active;
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::scalar};
  if (cpu_has_avx2()) out.push_back(Backend::avx2);
  return out;
}

const KernelTable& kernels_for(Backend b) {
  if (b == Backend::scalar) return scalar::table();
#if defined(QVSUM_HAVE_AVX2)
  if (b == Backend::avx2 && cpu_has_avx2()) return avx2::table();
#endif
  throw ConfigError("SIMD backend '" + std::string(to_string(b)) + "' is not available");
}

}  // namespace qvsum::simd
