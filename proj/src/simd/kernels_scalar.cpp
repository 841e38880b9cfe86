#include "hat/simd/kernels.hpp"

#include <algorithm>

namespace hat::simd {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_acc(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
}

void scale(double s, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = s * x[i];
}

void gemm_nn(const double* a, const double* b, double* c, std::size_t n,
             std::size_t k, std::size_t m, bool accumulate) {
  for (std::size_t i = 0; i < n; ++i) {
    double* crow = c + i * m;
    if (!accumulate) std::fill(crow, crow + m, 0.0);
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) axpy(arow[p], b + p * m, crow, m);
  }
}

void gemm_nt(const double* a, const double* b, double* c, std::size_t n,
             std::size_t m, std::size_t k, bool accumulate) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a + i * m;
    double* crow = c + i * k;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = dot(arow, b + j * m, m);
      crow[j] = accumulate ? crow[j] + v : v;
    }
  }
}

void gemm_tn(const double* a, const double* b, double* c, std::size_t n,
             std::size_t k, std::size_t m, bool accumulate) {
  if (!accumulate) std::fill(c, c + k * m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a + i * k;
    const double* brow = b + i * m;
    for (std::size_t p = 0; p < k; ++p) axpy(arow[p], brow, c + p * m, m);
  }
}

constexpr KernelTable kScalar{
    Backend::scalar, dot, sum_squares, axpy, add, sub, mul, mul_acc, scale,
    gemm_nn, gemm_nt, gemm_tn,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace hat::simd
