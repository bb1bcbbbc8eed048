#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wtrace/coefficients.hpp"
#include "wtrace/error.hpp"

using namespace wtrace;
using namespace wtrace::coeff;
using geom::Domain;
using cd = std::complex<double>;

namespace {

// A(chi_(l1,l2); a) for a > 0 from the defining integral, split at the jumps.
double indicator_oracle(double l1, double l2, double a) {
  const double chi_a = (l1 < a && a < l2) ? 1.0 : 0.0;
  auto f = [&](double t) {
    const double v = a * t;
    return ((l1 < v && v < l2 ? 1.0 : 0.0) - t * chi_a) / (t * (1.0 - t));
  };
  std::vector<double> cuts{0.0, 1.0};
  for (double c : {l1 / a, l2 / a})
    if (c > 0.0 && c < 1.0) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += oracle::tanh_sinh(f, cuts[i], cuts[i + 1]);
  return acc / (4.0 * oracle::pi * oracle::pi);
}

}  // namespace

TEST_CASE("A on polynomials matches the harmonic-number closed form") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> w(1 + t % 7);
    for (auto& v : w) v = u(rng);
    const double b = 1.5 * u(rng);
    CHECK(coeff_A(SymbolFunction::polynomial(w), b) == doctest::Approx(oracle::A_polynomial(w, b)).epsilon(1e-9).scale(1e-3));
  }
  CHECK(coeff_A(SymbolFunction::polynomial({1.0, -1.0}), 1.0) ==
        doctest::Approx(1.0 / (4.0 * oracle::pi * oracle::pi)).epsilon(1e-12));
}

TEST_CASE("A of the identity vanishes exactly") {
  for (double b : {-0.9, -0.2, 0.3, 1.0, 2.5}) CHECK(coeff_A(SymbolFunction::power(1), b) == 0.0);
}

TEST_CASE("A of the entropy and of smooth indicators against tanh-sinh") {
  CHECK(coeff_A(SymbolFunction::entropy(), 1.0) == doctest::Approx(oracle::A_entropy).epsilon(1e-10));
  CHECK(coeff_A_mellin(SymbolFunction::entropy()) == doctest::Approx(oracle::A_entropy).epsilon(1e-10));
  for (double b : {0.3, 0.7}) {
    const double ref = oracle::A_tanh_sinh(oracle::entropy, b);
    CHECK(coeff_A(SymbolFunction::entropy(), b) == doctest::Approx(ref).epsilon(1e-9));
  }
  const auto ind = SymbolFunction::mollified_indicator(0.2, 0.8, 0.1);
  const double ref = oracle::A_tanh_sinh([&](double t) { return ind(t); }, 1.0);
  CHECK(coeff_A(ind, 1.0) == doctest::Approx(ref).epsilon(1e-8));
  CHECK(coeff_A_mellin(ind) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("Mellin form needs g(1) = 0") {
  CHECK_THROWS_AS(coeff_A_mellin(SymbolFunction::power(2)), PreconditionError);
  CHECK(mellin_tail_estimate(SymbolFunction::entropy(), 6.0) < 1e-14);
}

TEST_CASE("A with complex b: polynomial closed form") {
  const std::vector<double> w{0.5, -1.0, 0.25};
  const cd b(0.4, -0.3);
  cd ref = 0.0;
  for (std::size_t m = 1; m <= w.size(); ++m) ref -= w[m - 1] * std::pow(b, static_cast<double>(m)) * oracle::harmonic(static_cast<int>(m) - 1);
  ref /= 4.0 * oracle::pi * oracle::pi;
  const cd v = coeff_A(SymbolFunction::polynomial(w), b);
  CHECK(std::abs(v - ref) < 1e-12);
  CHECK_THROWS_AS(coeff_A(SymbolFunction::entropy(), b), PreconditionError);
}

TEST_CASE("indicator A: closed form against the split integral") {
  for (double a : {0.02, 0.3, 0.5, 0.96, 1.0, 1.7}) {
    CAPTURE(a);
    CHECK(coeff_A_indicator(0.05, 0.95, a) == doctest::Approx(indicator_oracle(0.05, 0.95, a)).epsilon(1e-8).scale(1e-6));
  }
  CHECK(coeff_A_indicator(0.05, 0.95, 1.0) ==
        doctest::Approx(std::log(19.0 * 19.0) / (4.0 * oracle::pi * oracle::pi)).epsilon(1e-13));
  CHECK(coeff_A_indicator(0.2, 0.8, 0.1) == 0.0);
}

TEST_CASE("A bounds hold on a few representative cases") {
  for (double b : {-0.8, 0.4, 1.0}) {
    const auto r = check_A_bounds(SymbolFunction::polynomial({1.0, -2.0, 0.5}), b);
    CHECK(r.analytic_bound.has_value());
    CHECK(r.analytic_ok);
    CHECK(r.smooth_ok);
    CHECK(r.value <= *r.analytic_bound);
  }
  CHECK_FALSE(check_A_bounds(SymbolFunction::entropy(), 0.5).analytic_bound.has_value());
}

TEST_CASE("W0 equals |Lambda||Omega| / (2 pi)^d times the constant") {
  const double pi2 = 4.0 * oracle::pi * oracle::pi;
  CHECK(coeff_W0(ScalarSymbol::constant(1.0), Domain::disk(1.0), Domain::disk(1.0)).value.real() ==
        doctest::Approx(0.25).epsilon(1e-13));
  CHECK(coeff_W0(ScalarSymbol::constant(2.0), Domain::ellipse(1.0, 0.5), Domain::disk(0.5)).value.real() ==
        doctest::Approx(2.0 * 0.5 * oracle::pi * 0.25 * oracle::pi / pi2).epsilon(1e-13));
  CHECK(coeff_W0(ScalarSymbol::constant(1.0), Domain::intervals({{0.0, 1.0}}), Domain::intervals({{-1.0, 1.0}})).value.real() ==
        doctest::Approx(1.0 / oracle::pi).epsilon(1e-14));
  // b(x, xi) = x_1^2 on the unit disk x unit disk: (pi / 4) pi / (2 pi)^2.
  const auto x2 = ScalarSymbol::general("x1^2", [](std::span<const double> x, std::span<const double>) { return cd(x[0] * x[0]); }, {});
  const auto w = coeff_W0(x2, Domain::disk(1.0), Domain::disk(1.0));
  CHECK(w.value.real() == doctest::Approx(oracle::pi * oracle::pi / 4.0 / pi2).epsilon(1e-12));
  CHECK(w.error < 1e-12);
}

TEST_CASE("W1 for circles, intervals and the annulus") {
  const auto one = ScalarSymbol::constant(1.0);
  for (auto [r, R] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.5}, std::pair{2.0, 0.3}}) {
    const auto w = coeff_W1(one, Domain::disk(r), Domain::disk(R));
    CHECK(std::fabs(w.value.real() - oracle::w1_circles(r, R)) <= w.error);
    CHECK(w.value.real() == doctest::Approx(oracle::w1_circles(r, R)).epsilon(1e-4));
  }
  const auto d1 = coeff_W1(one, Domain::intervals({{0.0, 1.0}}), Domain::intervals({{-1.0, -0.5}, {0.5, 1.0}}));
  CHECK(d1.value.real() == 8.0);
  CHECK(d1.error == 0.0);
  const auto ring = coeff_W1(one, Domain::annulus(0.5, 1.0), Domain::disk(1.0));
  CHECK(ring.value.real() == doctest::Approx(oracle::w1_circles(1.0, 1.0) + oracle::w1_circles(0.5, 1.0)).epsilon(1e-4));
  // b = x_1^2: (2 pi)^-1 int cos^2(t) int |cos(t - s)| ds dt = 2.
  const auto x2 = ScalarSymbol::general("x1^2", [](std::span<const double> x, std::span<const double>) { return cd(x[0] * x[0]); }, {});
  CHECK(coeff_W1(x2, Domain::disk(1.0), Domain::disk(1.0)).value.real() == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("W1 is unchanged by one fixed affine map") {
  Eigen::Matrix2d m;
  m << 1.3, 0.4, -0.2, 0.7;
  const Eigen::Vector2d k(0.2, 0.1), k1(-0.3, 0.5);
  const auto b = [](std::span<const double> x, std::span<const double> xi) { return cd(1.0 + 0.3 * x[0] * xi[1]); };
  const Eigen::Matrix2d mit = m.transpose().inverse();
  const auto bt = [&](std::span<const double> x, std::span<const double> xi) {
    const Eigen::Vector2d y = m * Eigen::Vector2d(x[0], x[1]) + k, e = mit * Eigen::Vector2d(xi[0], xi[1]) + k1;
    return b(std::span<const double>(y.data(), 2), std::span<const double>(e.data(), 2));
  };
  const Domain l = Domain::ellipse(1.0, 0.6), w = Domain::disk(0.8);
  const Domain lt = geom::affine_image(l, {m, k, geom::AffineMap::Side::x_side});
  const Domain wt = geom::affine_image(w, {m, k1, geom::AffineMap::Side::xi_side});
  const auto s0 = ScalarSymbol::general("b", b, {}), s1 = ScalarSymbol::general("b'", bt, {});
  const cd v0 = coeff_W1(s0, geom::boundary_quadrature(l, 512), geom::boundary_quadrature(w, 512));
  const cd v1 = coeff_W1(s1, geom::boundary_quadrature(lt, 512), geom::boundary_quadrature(wt, 512));
  CHECK(std::abs(v1 - v0) / std::abs(v0) < 1e-10);
  CHECK(std::abs(coeff_W0(s1, lt, wt).value - coeff_W0(s0, l, w).value) < 1e-10);
}
