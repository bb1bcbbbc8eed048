// Compiled with -mavx2 -mfma; only reached through dispatch after a runtime
// CPU check.

#include <immintrin.h>

#include <cmath>

#include "wtrace/simd.hpp"

namespace wtrace::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double abs_dot_row(const double* nx, const double* ny, const double* w, std::size_t n,
                   double mx, double my) {
  const __m256d vmx = _mm256_set1_pd(mx);
  const __m256d vmy = _mm256_set1_pd(my);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    __m256d d0 = _mm256_fmadd_pd(vmx, _mm256_loadu_pd(nx + j),
                                 _mm256_mul_pd(vmy, _mm256_loadu_pd(ny + j)));
    __m256d d1 = _mm256_fmadd_pd(vmx, _mm256_loadu_pd(nx + j + 4),
                                 _mm256_mul_pd(vmy, _mm256_loadu_pd(ny + j + 4)));
    d0 = _mm256_andnot_pd(sign_mask, d0);
    d1 = _mm256_andnot_pd(sign_mask, d1);
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), d0, acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + j + 4), d1, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; j < n; ++j) acc += w[j] * std::fabs(mx * nx[j] + my * ny[j]);
  return acc;
}

double polynomial_sum(const double* coeffs, std::size_t p, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    __m256d h = _mm256_setzero_pd();
    for (std::size_t k = p; k-- > 0;) h = _mm256_fmadd_pd(h, vx, _mm256_set1_pd(coeffs[k]));
    acc = _mm256_fmadd_pd(h, vx, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    double h = 0.0;
    for (std::size_t k = p; k-- > 0;) h = h * x[i] + coeffs[k];
    total += h * x[i];
  }
  return total;
}

void scale_symmetric(double* m, std::size_t n, const double* s) {
  for (std::size_t j = 0; j < n; ++j) {
    double* col = m + j * n;
    const __m256d sj = _mm256_set1_pd(s[j]);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      __m256d f = _mm256_mul_pd(_mm256_loadu_pd(s + i), sj);
      _mm256_storeu_pd(col + i, _mm256_mul_pd(_mm256_loadu_pd(col + i), f));
    }
    for (; i < n; ++i) col[i] *= s[i] * s[j];
  }
}

}  // namespace wtrace::simd::avx2
