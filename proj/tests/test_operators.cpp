#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wtrace/coefficients.hpp"
#include "wtrace/error.hpp"
#include "wtrace/operators.hpp"

using namespace wtrace;
using namespace wtrace::ops;
using geom::Domain;
using geom::IntervalUnion;
using cd = std::complex<double>;

namespace {
const IntervalUnion unit{{{0.0, 1.0}}}, sym{{{-1.0, 1.0}}}, two{{{-1.0, -0.5}, {0.5, 1.0}}};
}

TEST_CASE("sine kernel spectrum matches an independent Nystrom solve") {
  const double alpha = 100.0;
  const auto lib = spectrum(build_T_1d(alpha, unit, sym, ScalarSymbol::constant(1.0))).eigenvalues;
  auto ref = oracle::sine_kernel_eigenvalues(alpha, 1.0, 24, 16);
  std::sort(ref.rbegin(), ref.rend());
  std::vector<double> top(lib.rbegin(), lib.rend());
  // The plunge region and the first eigenvalues below it.
  for (std::size_t k = 0; k < 45; ++k) {
    CAPTURE(k);
    CHECK(std::fabs(top[k] - ref[k]) < 1e-10);
  }
}

TEST_CASE("trace of chi P chi is alpha |Lambda||Omega| / (2 pi)") {
  for (double alpha : {37.0, 100.0, 420.0}) {
    CHECK(build_T_1d(alpha, unit, sym, ScalarSymbol::constant(1.0)).trace().real() ==
          doctest::Approx(alpha / oracle::pi).epsilon(1e-12));
    CHECK(build_T_1d(alpha, unit, two, ScalarSymbol::constant(1.0)).trace().real() ==
          doctest::Approx(alpha / (2.0 * oracle::pi)).epsilon(1e-12));
  }
}

TEST_CASE("projection spectrum lies in [0, 1] and tr g uses the eigenvalues") {
  const auto op = build_T_1d(200.0, unit, two, ScalarSymbol::constant(1.0));
  const auto s = spectrum(op);
  CHECK(contraction_defect(s) < 1e-12);
  double direct = 0.0;
  for (double l : s.eigenvalues) direct += l - l * l;
  CHECK(trace_g(s, SymbolFunction::polynomial({1.0, -1.0})) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(trace_polynomial(op, SymbolFunction::polynomial({1.0, -1.0})).real() == doctest::Approx(direct).epsilon(1e-10));
  CHECK_THROWS_AS(count_eigs(s, -0.1, 0.5), PreconditionError);
  const long n = count_eigs(s, 0.05, 0.95);
  CHECK(n == std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [](double l) { return l > 0.05 && l < 0.95; }));
}

TEST_CASE("multiplier symbols: T is real symmetric, S handles complex a") {
  const auto gauss = ScalarSymbol::multiplier("gaussian", [](double x) { return cd(std::exp(-x * x)); });
  const auto t = build_T_1d(80.0, unit, sym, gauss);
  CHECK(t.hermitian);
  CHECK_FALSE(t.is_complex);
  // tr T(a) = alpha / (2 pi) int_Omega a = (alpha / 2 pi) sqrt(pi) erf(1).
  CHECK(t.trace().real() == doctest::Approx(80.0 / (2.0 * oracle::pi) * std::sqrt(oracle::pi) * std::erf(1.0)).epsilon(1e-10));
  const auto twisted = ScalarSymbol::multiplier("twisted", [](double x) { return cd(1.0, 0.4 * x); });
  const auto tt = build_T_1d(60.0, unit, IntervalUnion{{{-0.5, 1.0}}}, twisted);
  const auto s = build_S_1d(60.0, unit, IntervalUnion{{{-0.5, 1.0}}}, twisted);
  CHECK(s.hermitian);
  CHECK(s.hermiticity_defect() < 1e-13);
  CHECK(tt.trace().real() == doctest::Approx(s.trace().real()).epsilon(1e-12));
}

TEST_CASE("operator builders reject bad input") {
  NystromOptions opt;
  opt.points_per_wavelength = 4.0;
  CHECK_THROWS_AS(build_T_1d(100.0, unit, sym, ScalarSymbol::constant(1.0), opt), PreconditionError);
  opt = {};
  opt.max_dim = 64;
  CHECK_THROWS_AS(build_T_1d(500.0, unit, sym, ScalarSymbol::constant(1.0), opt), PreconditionError);
  CHECK_THROWS_AS(build_T_1d(100.0, IntervalUnion{{{0.0, 1.0}, {0.5, 2.0}}}, sym, ScalarSymbol::constant(1.0)),
                  PreconditionError);
}

TEST_CASE("lattice correlation: disk sea against Bessel J1") {
  const Domain sea = Domain::disk(1.0);
  for (auto [dx, dy] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{3, -4}, std::pair{7, 2}}) {
    const cd c = fermion_correlation(sea, dx, dy);
    CHECK(c.real() == doctest::Approx(oracle::disk_correlation(1.0, dx, dy)).epsilon(1e-12).scale(1e-14));
    CHECK(std::fabs(c.imag()) < 1e-15);
  }
}

TEST_CASE("lattice correlation: star-shaped seas against a polar oracle") {
  const auto fr = geom::RadiusFunction::fourier(1.0, {0.2, 0.1}, {0.05});
  const auto se = geom::RadiusFunction::superellipse(0.9, 8);
  for (const auto& rf : {fr, se}) {
    const Domain sea = Domain::parametric(rf);
    for (auto [dx, dy] : {std::pair{0, 0}, std::pair{2, 1}, std::pair{-5, 3}}) {
      const cd c = fermion_correlation(sea, dx, dy);
      const cd ref = oracle::star_correlation(rf.r, dx, dy);
      CHECK(std::abs(c - ref) < 1e-10);
    }
  }
}

TEST_CASE("lattice correlation matrix: trace and spectrum") {
  const auto sites = lattice_sites(Domain::disk(1.0), 10.0);
  const auto op = build_fermion_correlation_2d(sites, Domain::disk(1.0));
  CHECK(op.trace().real() == doctest::Approx(sites.rows() / (4.0 * oracle::pi)).epsilon(1e-13));
  const auto s = spectrum(op);
  CHECK(s.eigenvalues.front() > -1e-12);
  CHECK(s.eigenvalues.back() < 1.0 + 1e-12);
  CHECK_THROWS_AS(build_fermion_correlation_2d(sites, Domain::disk(3.5)), PreconditionError);
}

TEST_CASE("model kernel: K(1,1) = A(g), homogeneity and the multiplier") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (const auto& g : {SymbolFunction::polynomial({1.0, -1.0}), SymbolFunction::entropy()}) {
    CHECK(std::abs(model_kernel_K(g, Sign::plus, 1.0, 1.0) - coeff::coeff_A(g, 1.0)) < 1e-10);
    for (int k = 0; k < 5; ++k) {
      const double t = u(rng), x = u(rng), y = u(rng);
      const cd a = model_kernel_K(g, Sign::minus, t * x, t * y), b = model_kernel_K(g, Sign::minus, x, y) / t;
      CHECK(std::abs(a - b) < 1e-9);
    }
  }
  CHECK(mellin_multiplier(0.0, Sign::plus) == doctest::Approx(0.5));
  CHECK(mellin_multiplier(0.3, Sign::plus) == doctest::Approx(1.0 / (1.0 + std::exp(2.0 * oracle::pi * 0.3))));
  CHECK(mellin_multiplier(0.3, Sign::minus) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0 * oracle::pi * 0.3))));
}
