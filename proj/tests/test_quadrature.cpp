#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wtrace/error.hpp"
#include "wtrace/quadrature.hpp"

using namespace wtrace;

TEST_CASE("Gauss-Legendre nodes match Newton-iterated Legendre roots") {
  for (int n : {1, 2, 5, 16, 48, 128}) {
    std::vector<double> x, w;
    oracle::gauss_legendre(n, x, w);
    const auto& r = quad::gauss_legendre(n);
    REQUIRE(r.size() == static_cast<std::size_t>(n));
    std::sort(x.begin(), x.end());
    std::vector<std::pair<double, double>> lib;
    for (int i = 0; i < n; ++i) lib.push_back({r.nodes[i], r.weights[i]});
    std::sort(lib.begin(), lib.end());
    std::vector<std::pair<double, double>> ref;
    for (int i = 0; i < n; ++i) ref.push_back({x[i], w[i]});
    std::sort(ref.begin(), ref.end());
    for (int i = 0; i < n; ++i) {
      CHECK(lib[i].first == doctest::Approx(ref[i].first).epsilon(1e-13).scale(1.0));
      CHECK(lib[i].second == doctest::Approx(ref[i].second).epsilon(1e-12));
    }
  }
}

TEST_CASE("Gauss-Jacobi integrates the weighted monomials exactly") {
  // int_{-1}^{1} (1+x)^b x^k dx via the Beta function for k = 0, 1.
  for (double b : {-0.5, 0.5, 1.5}) {
    const auto r = quad::gauss_jacobi(12, 0.0, b);
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      m0 += r.weights[i];
      m1 += r.weights[i] * r.nodes[i];
    }
    const double e0 = std::pow(2.0, b + 1.0) / (b + 1.0);
    const double e1 = std::pow(2.0, b + 2.0) / (b + 2.0) - e0;  // x = (1 + x) - 1
    CHECK(m0 == doctest::Approx(e0).epsilon(1e-13));
    CHECK(m1 == doctest::Approx(e1).epsilon(1e-12));
  }
}

TEST_CASE("endpoint_power_rule absorbs sqrt behaviour at either end") {
  // int_0^2 sqrt(s) cos(s) ds and the reflected version.
  const double ref = oracle::tanh_sinh([](double s) { return std::sqrt(s) * std::cos(s); }, 0.0, 2.0);
  const auto lo = quad::endpoint_power_rule(0.0, 2.0, 20, 0.5, true);
  const auto hi = quad::endpoint_power_rule(-2.0, 0.0, 20, 0.5, false);
  CHECK(lo.apply([](double s) { return std::sqrt(s) * std::cos(s); }) == doctest::Approx(ref).epsilon(1e-13));
  CHECK(hi.apply([](double s) { return std::sqrt(-s) * std::cos(s); }) == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("adaptive integration meets its tolerance and reports failure by name") {
  const auto r = quad::integrate([](double t) { return std::log(t); }, 0.0, 1.0, {1e-12, 0.0, 5000});
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-11));
  CHECK(r.error <= 1e-12);
  try {
    quad::integrate([](double t) { return 1.0 / t; }, 0.0, 1.0, {1e-12, 0.0, 50}, "unit_probe");
    FAIL("expected a NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("unit_probe") != std::string::npos);
  }
}

TEST_CASE("composite rule covers the interval with the right total weight") {
  const auto r = quad::composite_gauss_legendre(-1.0, 3.0, 5, 8);
  CHECK(r.size() == 40);
  CHECK(r.apply([](double) { return 1.0; }) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(r.apply([](double x) { return std::exp(x); }) == doctest::Approx(std::exp(3.0) - std::exp(-1.0)).epsilon(1e-14));
}
