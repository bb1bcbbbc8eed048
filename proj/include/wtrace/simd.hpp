#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation; an AVX2/FMA variant is selected at runtime when the CPU
// supports it. Tests check the variants against each other.

#include <cstddef>
#include <span>
#include <string_view>

namespace wtrace::simd {

enum class Level { scalar, avx2 };

std::string_view level_name(Level level);

/// Best level supported by both the build and the running CPU.
Level detected_level();

/// Level used by the dispatching entry points. Defaults to detected_level(),
/// or to scalar when WTRACE_SIMD=scalar is set in the environment.
Level active_level();

/// Overrides the dispatch level. Requests above detected_level() are clamped.
void force_level(Level level);

/// sum_j w[j] * |mx * nx[j] + my * ny[j]|
/// The row sum of the boundary-pair integrand for planar normals.
double abs_dot_row(std::span<const double> nx, std::span<const double> ny,
                   std::span<const double> w, double mx, double my);

/// sum_i sum_{p=1..P} coeffs[p-1] * x[i]^p  (no constant term)
double polynomial_sum(std::span<const double> coeffs, std::span<const double> x);

/// m(i, j) *= s[i] * s[j] for a column-major n x n matrix.
void scale_symmetric(double* m, std::size_t n, std::span<const double> s);

namespace scalar {
double abs_dot_row(const double* nx, const double* ny, const double* w, std::size_t n,
                   double mx, double my);
double polynomial_sum(const double* coeffs, std::size_t p, const double* x, std::size_t n);
void scale_symmetric(double* m, std::size_t n, const double* s);
}  // namespace scalar

namespace avx2 {
double abs_dot_row(const double* nx, const double* ny, const double* w, std::size_t n,
                   double mx, double my);
double polynomial_sum(const double* coeffs, std::size_t p, const double* x, std::size_t n);
void scale_symmetric(double* m, std::size_t n, const double* s);
}  // namespace avx2

}  // namespace wtrace::simd
