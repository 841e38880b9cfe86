// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and is only entered after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <vector>

#include "hat/simd/kernels.hpp"

namespace hat::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
    a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), a2);
    a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), a3);
  }
  for (; i + 4 <= n; i += 4) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  }
  double s = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_squares(const double* x, std::size_t n) { return dot(x, x, n); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

template <class Op, class Tail>
inline void binary(const double* a, const double* b, double* out, std::size_t n, Op op,
                   Tail tail) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, op(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = tail(a[i], b[i]);
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_add_pd(x, y); },
         [](double x, double y) { return x + y; });
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_sub_pd(x, y); },
         [](double x, double y) { return x - y; });
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_mul_pd(x, y); },
         [](double x, double y) { return x * y; });
}

void mul_acc(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                                              _mm256_loadu_pd(out + i)));
  }
  for (; i < n; ++i) out[i] += a[i] * b[i];
}

void scale(double s, const double* x, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = s * x[i];
}

// Accumulates, for output columns [j, j+16) of one row, the sum over p of
// coeff(p) * rows(p)[j..]. Keeps the 16 partial sums in registers.
template <class Coeff, class Row>
inline void block16(double* out, std::size_t j, std::size_t count, bool accumulate, Coeff coeff,
                    Row row) {
  __m256d c0, c1, c2, c3;
  if (accumulate) {
    c0 = _mm256_loadu_pd(out + j);
    c1 = _mm256_loadu_pd(out + j + 4);
    c2 = _mm256_loadu_pd(out + j + 8);
    c3 = _mm256_loadu_pd(out + j + 12);
  } else {
    c0 = c1 = c2 = c3 = _mm256_setzero_pd();
  }
  for (std::size_t p = 0; p < count; ++p) {
    const __m256d va = _mm256_set1_pd(coeff(p));
    const double* r = row(p) + j;
    c0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(r), c0);
    c1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(r + 4), c1);
    c2 = _mm256_fmadd_pd(va, _mm256_loadu_pd(r + 8), c2);
    c3 = _mm256_fmadd_pd(va, _mm256_loadu_pd(r + 12), c3);
  }
  _mm256_storeu_pd(out + j, c0);
  _mm256_storeu_pd(out + j + 4, c1);
  _mm256_storeu_pd(out + j + 8, c2);
  _mm256_storeu_pd(out + j + 12, c3);
}

template <class Coeff, class Row>
inline void block4(double* out, std::size_t j, std::size_t count, bool accumulate, Coeff coeff,
                   Row row) {
  __m256d c0 = accumulate ? _mm256_loadu_pd(out + j) : _mm256_setzero_pd();
  for (std::size_t p = 0; p < count; ++p) {
    c0 = _mm256_fmadd_pd(_mm256_set1_pd(coeff(p)), _mm256_loadu_pd(row(p) + j), c0);
  }
  _mm256_storeu_pd(out + j, c0);
}

template <class Coeff, class Row>
inline void combine_rows(double* out, std::size_t m, std::size_t count, bool accumulate,
                         Coeff coeff, Row row) {
  std::size_t j = 0;
  for (; j + 16 <= m; j += 16) block16(out, j, count, accumulate, coeff, row);
  for (; j + 4 <= m; j += 4) block4(out, j, count, accumulate, coeff, row);
  for (; j < m; ++j) {
    double s = accumulate ? out[j] : 0.0;
    for (std::size_t p = 0; p < count; ++p) s += coeff(p) * row(p)[j];
    out[j] = s;
  }
}

void gemm_nn(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
             std::size_t m, bool accumulate) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a + i * k;
    combine_rows(
        c + i * m, m, k, accumulate, [arow](std::size_t p) { return arow[p]; },
        [b, m](std::size_t p) { return b + p * m; });
  }
}

void gemm_nt(const double* a, const double* b, double* c, std::size_t n, std::size_t m,
             std::size_t k, bool accumulate) {
  if (k >= 4) {
    // Transpose b once and reuse the row-combining kernel.
    thread_local std::vector<double> bt;
    bt.resize(m * k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t p = 0; p < m; ++p) bt[p * k + j] = b[j * m + p];
    gemm_nn(a, bt.data(), c, n, m, k, accumulate);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a + i * m;
    double* crow = c + i * k;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = dot(arow, b + j * m, m);
      crow[j] = accumulate ? crow[j] + v : v;
    }
  }
}

// Rows of a and b are consumed in panels small enough for the panel of b to
// stay in cache while every output row is updated from it.
void gemm_tn(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
             std::size_t m, bool accumulate) {
  constexpr std::size_t kPanel = 64;
  if (n == 0) {
    if (!accumulate) std::fill(c, c + k * m, 0.0);
    return;
  }
  for (std::size_t i0 = 0; i0 < n; i0 += kPanel) {
    const std::size_t count = std::min(kPanel, n - i0);
    const double* ap = a + i0 * k;
    const double* bp = b + i0 * m;
    for (std::size_t p = 0; p < k; ++p) {
      combine_rows(
          c + p * m, m, count, accumulate || i0 > 0, [ap, k, p](std::size_t i) { return ap[i * k + p]; },
          [bp, m](std::size_t i) { return bp + i * m; });
    }
  }
}

constexpr KernelTable kAvx2{
    Backend::avx2, dot, sum_squares, axpy, add, sub, mul, mul_acc, scale,
    gemm_nn, gemm_nt, gemm_tn,
};

}  // namespace

const KernelTable& avx2_kernels() { return kAvx2; }

}  // namespace hat::simd
