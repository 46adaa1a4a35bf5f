#pragma once

// Inner-loop kernels shared by the dense linear algebra. Every kernel has a
// scalar reference version; an AVX2+FMA version is compiled when the
// toolchain supports it and selected at runtime if the CPU does.
//
// HAPPRS_SIMD=scalar|avx2|auto overrides the runtime choice.

#include <cstddef>
#include <string_view>

namespace happrs::simd {

struct KernelTable {
  std::string_view name;

  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A row-major rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y = A^T x, A row-major rows x cols
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // max_i |x[i]|
  double (*max_abs)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

// Table used by the library. Resolved once, on first call.
const KernelTable& active_kernels();

}  // namespace happrs::simd
