#pragma once

// Dense double-precision inner loops used by the autodiff engine.
//
// Every kernel has a portable scalar reference and, on x86-64 builds, an
// AVX2/FMA variant. The active table is chosen once at startup from CPUID
// and can be overridden with HAT_SIMD=scalar|avx2 or set_backend().
//
// Matrices are row-major. Results for one output row never depend on how
// many other rows are processed in the same call, so batching is exact.

#include <cstddef>
#include <string_view>

namespace hat::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
  Backend backend;

  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i x[i]^2
  double (*sum_squares)(const double* x, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out = a + b
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  // out = a - b
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  // out = a * b
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // out += a * b
  void (*mul_acc)(const double* a, const double* b, double* out, std::size_t n);
  // out = s * x
  void (*scale)(double s, const double* x, double* out, std::size_t n);

  // c[n x m] (+)= a[n x k] * b[k x m]
  void (*gemm_nn)(const double* a, const double* b, double* c, std::size_t n,
                  std::size_t k, std::size_t m, bool accumulate);
  // c[n x k] (+)= a[n x m] * b[k x m]^T
  void (*gemm_nt)(const double* a, const double* b, double* c, std::size_t n,
                  std::size_t m, std::size_t k, bool accumulate);
  // c[k x m] (+)= a[n x k]^T * b[n x m]
  void (*gemm_tn)(const double* a, const double* b, double* c, std::size_t n,
                  std::size_t k, std::size_t m, bool accumulate);
};

const KernelTable& scalar_kernels();

// True when the AVX2 variant was compiled in and the CPU supports AVX2+FMA.
bool avx2_available();

// Throws std::runtime_error if the requested backend is unavailable.
const KernelTable& kernel_table(Backend backend);

// The process-wide active table.
const KernelTable& kernels();
void set_backend(Backend backend);
Backend active_backend();

std::string_view backend_name(Backend backend);

}  // namespace hat::simd
