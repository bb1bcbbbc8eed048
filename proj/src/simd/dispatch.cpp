#include <atomic>
#include <cstdlib>
#include <cstring>

#include "wtrace/error.hpp"
#include "wtrace/simd.hpp"

namespace wtrace::simd {

namespace {

bool cpu_has_avx2() {
#if defined(WTRACE_BUILD_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Level initial_level() {
  const char* env = std::getenv("WTRACE_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Level::scalar;
  return detected_level();
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

#if !defined(WTRACE_BUILD_AVX2)
// Without the AVX2 translation unit the avx2 entry points alias the scalar
// ones; detected_level() never reports avx2 in that configuration.
namespace avx2 {
double abs_dot_row(const double* nx, const double* ny, const double* w, std::size_t n,
                   double mx, double my) {
  return scalar::abs_dot_row(nx, ny, w, n, mx, my);
}
double polynomial_sum(const double* coeffs, std::size_t p, const double* x, std::size_t n) {
  return scalar::polynomial_sum(coeffs, p, x, n);
}
void scale_symmetric(double* m, std::size_t n, const double* s) {
  scalar::scale_symmetric(m, n, s);
}
}  // namespace avx2
#endif

std::string_view level_name(Level level) {
  return level == Level::avx2 ? "avx2" : "scalar";
}

Level detected_level() {
  static const Level level = cpu_has_avx2() ? Level::avx2 : Level::scalar;
  return level;
}

Level active_level() { return current().load(std::memory_order_relaxed); }

void force_level(Level level) {
  if (level == Level::avx2 && detected_level() != Level::avx2) level = Level::scalar;
  current().store(level, std::memory_order_relaxed);
}

double abs_dot_row(std::span<const double> nx, std::span<const double> ny,
                   std::span<const double> w, double mx, double my) {
  require(nx.size() == ny.size() && nx.size() == w.size(), "abs_dot_row: length mismatch");
#if defined(WTRACE_BUILD_AVX2)
  if (active_level() == Level::avx2)
    return avx2::abs_dot_row(nx.data(), ny.data(), w.data(), nx.size(), mx, my);
#endif
  return scalar::abs_dot_row(nx.data(), ny.data(), w.data(), nx.size(), mx, my);
}

double polynomial_sum(std::span<const double> coeffs, std::span<const double> x) {
#if defined(WTRACE_BUILD_AVX2)
  if (active_level() == Level::avx2)
    return avx2::polynomial_sum(coeffs.data(), coeffs.size(), x.data(), x.size());
#endif
  return scalar::polynomial_sum(coeffs.data(), coeffs.size(), x.data(), x.size());
}

void scale_symmetric(double* m, std::size_t n, std::span<const double> s) {
  require(s.size() == n, "scale_symmetric: length mismatch");
#if defined(WTRACE_BUILD_AVX2)
  if (active_level() == Level::avx2) return avx2::scale_symmetric(m, n, s.data());
#endif
  scalar::scale_symmetric(m, n, s.data());
}

}  // namespace wtrace::simd
