#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "wtrace/simd.hpp"

using namespace wtrace;

namespace {

std::vector<double> randoms(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

struct LevelGuard {
  simd::Level saved = simd::active_level();
  ~LevelGuard() { simd::force_level(saved); }
};

}  // namespace

TEST_CASE("dispatched kernels agree with the scalar reference at every length") {
  LevelGuard guard;
  std::mt19937_64 rng(7);
  for (simd::Level level : {simd::Level::scalar, simd::detected_level()}) {
    simd::force_level(level);
    CAPTURE(simd::level_name(simd::active_level()));
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 1001u}) {
      CAPTURE(n);
      auto nx = randoms(rng, n, -1, 1), ny = randoms(rng, n, -1, 1), w = randoms(rng, n, 0, 1);
      const double ref = simd::scalar::abs_dot_row(nx.data(), ny.data(), w.data(), n, 0.3, -0.7);
      CHECK(simd::abs_dot_row(nx, ny, w, 0.3, -0.7) == doctest::Approx(ref).epsilon(1e-13));

      auto x = randoms(rng, n, -0.9, 0.9);
      for (std::size_t p : {1u, 2u, 5u, 12u}) {
        auto c = randoms(rng, p, -1, 1);
        const double pr = simd::scalar::polynomial_sum(c.data(), p, x.data(), n);
        CHECK(simd::polynomial_sum(c, x) == doctest::Approx(pr).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("polynomial_sum has no constant term") {
  const std::vector<double> c{2.0, -1.0}, x{0.5, -1.0, 0.0};
  // 2x - x^2 summed: 0.75 + (-3) + 0
  CHECK(simd::polynomial_sum(c, x) == doctest::Approx(-2.25));
}

TEST_CASE("scale_symmetric matches the explicit diagonal product") {
  LevelGuard guard;
  std::mt19937_64 rng(3);
  for (simd::Level level : {simd::Level::scalar, simd::detected_level()}) {
    simd::force_level(level);
    for (std::size_t n : {1u, 2u, 5u, 33u}) {
      auto m = randoms(rng, n * n, -1, 1), s = randoms(rng, n, 0.1, 2);
      auto expect = m;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) expect[i + j * n] *= s[i] * s[j];
      simd::scale_symmetric(m.data(), n, s);
      for (std::size_t k = 0; k < n * n; ++k) CHECK(m[k] == doctest::Approx(expect[k]).epsilon(1e-15));
    }
  }
}

TEST_CASE("force_level clamps requests to what the CPU supports") {
  LevelGuard guard;
  simd::force_level(simd::Level::avx2);
  CHECK(simd::active_level() == simd::detected_level());
  simd::force_level(simd::Level::scalar);
  CHECK(simd::active_level() == simd::Level::scalar);
}
