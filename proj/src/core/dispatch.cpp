#include <cstdlib>
#include <string_view>

#include "happrs/core/kernels.hpp"

namespace happrs::simd {

#if defined(HAPPRS_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

namespace {

bool cpu_supports_avx2() {
#if defined(HAPPRS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& resolve() {
  const char* env = std::getenv("HAPPRS_SIMD");
  const std::string_view choice = env ? env : "auto";
  if (choice == "scalar") return scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(HAPPRS_HAVE_AVX2)
  static const bool ok = cpu_supports_avx2();
  return ok ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = resolve();
  return table;
}

}  // namespace happrs::simd
