#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hat/simd/kernels.hpp"

namespace hat::simd {

#if defined(HAT_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

namespace {

bool detect_avx2() {
#if defined(HAT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("HAT_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return &scalar_kernels();
    if (v == "avx2" && avx2_available()) return &kernel_table(Backend::avx2);
  }
  return avx2_available() ? &kernel_table(Backend::avx2) : &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

bool avx2_available() {
  static const bool available = detect_avx2();
  return available;
}

const KernelTable& kernel_table(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return scalar_kernels();
    case Backend::avx2:
#if defined(HAT_HAVE_AVX2)
      if (avx2_available()) return avx2_kernels();
#endif
      throw std::runtime_error("AVX2 kernels are not available on this build/CPU");
  }
  throw std::runtime_error("unknown kernel backend");
}

const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

void set_backend(Backend backend) { active().store(&kernel_table(backend)); }

Backend active_backend() { return kernels().backend; }

std::string_view backend_name(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace hat::simd
