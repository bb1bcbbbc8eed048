#include "wtrace/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wtrace/error.hpp"
#include "wtrace/quadrature.hpp"
#include "wtrace/simd.hpp"

namespace wtrace::coeff {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;

std::complex<double> horner_complex(std::span<const double> c, std::complex<double> z) {
  std::complex<double> h = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) h = h * z + c[k];
  return h * z;
}

// 1 / (1 + e^{2 pi s}) without overflow.
double logistic(double s) {
  if (s > 0.0) {
    const double e = std::exp(-2.0 * kPi * s);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(2.0 * kPi * s));
}

}  // namespace

double coeff_A(const SymbolFunction& g, double b, double tol) {
  require(tol > 0.0, "coeff_A: tol must be positive");
  require(g.in_domain(b) && g.in_domain(0.0), "coeff_A: b outside the domain of g");
  const double gb = g(b);
  auto integrand = [&](double t) { return (g(b * t) - t * gb) / (t * (1.0 - t)); };
  quad::AdaptiveOptions opt;
  opt.abs_tol = tol * kFourPiSq;
  opt.max_intervals = 20000;
  return quad::integrate(integrand, 0.0, 1.0, opt, "coeff_A").value / kFourPiSq;
}

std::complex<double> coeff_A(const SymbolFunction& g, std::complex<double> b, double tol) {
  if (b.imag() == 0.0) return coeff_A(g, b.real(), tol);
  require(g.kind() != SymbolFunction::Kind::smooth,
          "coeff_A: complex b needs a polynomial or analytic-series g");
  if (g.radius()) require(std::abs(b) < *g.radius(), "coeff_A: |b| outside the radius of convergence");
  const auto c = g.coefficients();
  const std::complex<double> gb = horner_complex(c, b);
  quad::AdaptiveOptions opt;
  opt.abs_tol = tol * kFourPiSq / std::sqrt(2.0);
  opt.max_intervals = 20000;
  auto part = [&](bool imag) {
    auto f = [&, imag](double t) {
      std::complex<double> v = (horner_complex(c, b * t) - t * gb) / (t * (1.0 - t));
      return imag ? v.imag() : v.real();
    };
    return quad::integrate(f, 0.0, 1.0, opt, "coeff_A").value / kFourPiSq;
  };
  return {part(false), part(true)};
}

double coeff_A_mellin(const SymbolFunction& g, double tol, double s_max) {
  require(tol > 0.0 && s_max > 0.0, "coeff_A_mellin: tol and s_max must be positive");
  require(g.in_domain(1.0), "coeff_A_mellin: g must be defined on [0, 1]");
  if (std::fabs(g(1.0)) > 1e-12)
    throw PreconditionError("coeff_A_mellin: g(1) != 0, the Mellin integrand does not decay");
  auto integrand = [&](double s) { return g(logistic(s)); };
  quad::AdaptiveOptions opt;
  opt.abs_tol = tol * 2.0 * kPi;
  opt.max_intervals = 20000;
  return quad::integrate(integrand, -s_max, s_max, opt, "coeff_A_mellin").value / (2.0 * kPi);
}

double mellin_tail_estimate(const SymbolFunction& g, double s_max) {
  // |g(t)| <= L min(t, 1-t) near the ends; each tail is then at most
  // L e^{-2 pi s_max} / (2 pi) before the 1/(2 pi) prefactor.
  double lip = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double t = k / 1000.0;
    lip = std::max(lip, std::fabs(g(t)) / std::min(t, 1.0 - t));
  }
  return 2.0 * lip * std::exp(-2.0 * kPi * s_max) / kFourPiSq;
}

double coeff_A_indicator(double l1, double l2, double a) {
  require(0.0 < l1 && l1 < l2, "coeff_A_indicator: need 0 < l1 < l2");
  if (a == l1 || a == l2) throw PreconditionError("coeff_A_indicator: a at an interval end is singular");
  if (a <= 0.0 || a < l1) return 0.0;
  if (a < l2) return std::log(a / l1 - 1.0) / kFourPiSq;
  return std::log(l2 * (a - l1) / (l1 * (a - l2))) / kFourPiSq;
}

ABoundCheck check_A_bounds(const SymbolFunction& g, double b) {
  ABoundCheck out;
  out.value = std::fabs(coeff_A(g, b, 1e-13));
  const double ab = std::fabs(b);
  const double slack = 1e-12;
  if (auto maj = g.majorants()) {
    out.analytic_bound = ab * maj->g1(ab) / kFourPiSq;
    out.analytic_ok = out.value <= *out.analytic_bound * (1.0 + 1e-9) + slack;
  }
  double sup = 0.0;
  const int grid = 10000;
  for (int k = 0; k < grid; ++k) {
    const double t = -ab + 2.0 * ab * (k + 0.5) / grid;
    if (!g.in_domain(t)) continue;
    sup = std::max(sup, std::fabs(g.derivative(t)));
  }
  out.smooth_bound = ab * sup / (kPi * kPi);
  out.smooth_ok = out.value <= out.smooth_bound * (1.0 + 1e-9) + slack;
  return out;
}

// ---------------------------------------------------------------------------

CoefficientValue coeff_W0(const ScalarSymbol& b, const geom::Domain& lambda,
                          const geom::Domain& omega, const QuadratureSpec& quad) {
  require(lambda.dimension() == omega.dimension(), "coeff_W0: dimension mismatch");
  require(lambda.bounded() && omega.bounded(), "coeff_W0: domains must be bounded");
  const int d = lambda.dimension();
  const double prefactor = std::pow(2.0 * kPi, -d);
  if (b.is_constant()) {
    // Volumes of the two domains; the refined run checks the volume rules.
    const double v1 = geom::measure(lambda, quad.outer_nodes, quad.inner_nodes);
    const double v2 = geom::measure(omega, quad.outer_nodes, quad.inner_nodes);
    const double r1 = geom::measure(lambda, 2 * quad.outer_nodes, 2 * quad.inner_nodes);
    const double r2 = geom::measure(omega, 2 * quad.outer_nodes, 2 * quad.inner_nodes);
    const std::complex<double> c = b.constant_value();
    return {c * v1 * v2 * prefactor, std::abs(c) * std::fabs(v1 * v2 - r1 * r2) * prefactor};
  }
  auto run = [&](int outer, int inner) {
    geom::VolumeRule rx = geom::volume_rule(lambda, outer, inner);
    geom::VolumeRule rk = geom::volume_rule(omega, outer, inner);
    std::complex<double> acc = 0.0;
    std::vector<double> x(d), xi(d);
    for (std::size_t i = 0; i < rx.size(); ++i) {
      for (int c = 0; c < d; ++c) x[c] = rx.points(i, c);
      std::complex<double> row = 0.0;
      for (std::size_t j = 0; j < rk.size(); ++j) {
        for (int c = 0; c < d; ++c) xi[c] = rk.points(j, c);
        row += rk.weights(j) * b(x, xi);
      }
      acc += rx.weights(i) * row;
    }
    return acc * prefactor;
  };
  const std::complex<double> v = run(quad.outer_nodes, quad.inner_nodes);
  const std::complex<double> r = run(2 * quad.outer_nodes, 2 * quad.inner_nodes);
  return {v, std::abs(v - r)};
}

std::complex<double> coeff_W1(const ScalarSymbol& b, const geom::BoundaryQuadrature& s,
                              const geom::BoundaryQuadrature& p) {
  require(s.dimension() == p.dimension(), "coeff_W1: dimension mismatch");
  const int d = s.dimension();
  const double prefactor = std::pow(2.0 * kPi, -(d - 1));
  const Eigen::Index np = static_cast<Eigen::Index>(p.size());
  std::complex<double> acc = 0.0;
  if (d == 2) {
    std::span<const double> nx(p.normals.col(0).data(), np), ny(p.normals.col(1).data(), np);
    if (b.is_constant()) {
      std::span<const double> w(p.weights.data(), np);
      double re = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i)
        re += s.weights(i) * simd::abs_dot_row(nx, ny, w, s.normals(i, 0), s.normals(i, 1));
      return b.constant_value() * re * prefactor;
    }
    std::vector<double> wre(np), wim(np);
    double x[2], xi[2];
    for (std::size_t i = 0; i < s.size(); ++i) {
      x[0] = s.points(i, 0);
      x[1] = s.points(i, 1);
      for (Eigen::Index j = 0; j < np; ++j) {
        xi[0] = p.points(j, 0);
        xi[1] = p.points(j, 1);
        const std::complex<double> v = b(x, xi);
        wre[j] = p.weights(j) * v.real();
        wim[j] = p.weights(j) * v.imag();
      }
      const double mx = s.normals(i, 0), my = s.normals(i, 1);
      acc += s.weights(i) * std::complex<double>(simd::abs_dot_row(nx, ny, wre, mx, my),
                                                 simd::abs_dot_row(nx, ny, wim, mx, my));
    }
    return acc * prefactor;
  }
  std::vector<double> x(d), xi(d);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int c = 0; c < d; ++c) x[c] = s.points(i, c);
    for (Eigen::Index j = 0; j < np; ++j) {
      for (int c = 0; c < d; ++c) xi[c] = p.points(j, c);
      const double dot = std::fabs(s.normals.row(i).dot(p.normals.row(j)));
      acc += s.weights(i) * p.weights(j) * dot * b(x, xi);
    }
  }
  return acc * prefactor;
}

CoefficientValue coeff_W1(const ScalarSymbol& b, const geom::Domain& lambda,
                          const geom::Domain& omega, const QuadratureSpec& quad) {
  require(lambda.dimension() == omega.dimension(), "coeff_W1: dimension mismatch");
  const int n = quad.boundary_nodes;
  auto bs = geom::boundary_quadrature(lambda, n, quad.lambda_window);
  auto bp = geom::boundary_quadrature(omega, n, quad.omega_window);
  const std::complex<double> v = coeff_W1(b, bs, bp);
  if (lambda.dimension() == 1) return {v, 0.0};
  auto bs2 = geom::boundary_quadrature(lambda, 2 * n, quad.lambda_window);
  auto bp2 = geom::boundary_quadrature(omega, 2 * n, quad.omega_window);
  const std::complex<double> r = coeff_W1(b, bs2, bp2);
  // The |n . n| kink limits the trapezoid to second order.
  return {v, std::abs(r - v) * 4.0 / 3.0};
}

}  // namespace wtrace::coeff
