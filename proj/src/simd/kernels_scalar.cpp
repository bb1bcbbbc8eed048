#include <cmath>

#include "wtrace/simd.hpp"

namespace wtrace::simd::scalar {

double abs_dot_row(const double* nx, const double* ny, const double* w, std::size_t n,
                   double mx, double my) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += w[j] * std::fabs(mx * nx[j] + my * ny[j]);
  return acc;
}

double polynomial_sum(const double* coeffs, std::size_t p, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double h = 0.0;
    for (std::size_t k = p; k-- > 0;) h = h * x[i] + coeffs[k];
    acc += h * x[i];
  }
  return acc;
}

void scale_symmetric(double* m, std::size_t n, const double* s) {
  for (std::size_t j = 0; j < n; ++j) {
    double* col = m + j * n;
    const double sj = s[j];
    for (std::size_t i = 0; i < n; ++i) col[i] *= s[i] * sj;
  }
}

}  // namespace wtrace::simd::scalar
