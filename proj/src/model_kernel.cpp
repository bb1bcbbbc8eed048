#include <cmath>
#include <numbers>

#include "wtrace/error.hpp"
#include "wtrace/operators.hpp"
#include "wtrace/quadrature.hpp"

namespace wtrace::ops {

double mellin_multiplier(double z, Sign sign) {
  const double u = sign == Sign::plus ? z : -z;
  const double two_pi = 2.0 * std::numbers::pi;
  if (u > 0.0) {
    const double e = std::exp(-two_pi * u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(two_pi * u));
}

std::complex<double> model_kernel_K(const SymbolFunction& g, Sign sign, double x, double y, double s_max,
                                    double tol) {
  require(x > 0.0 && y > 0.0, "model_kernel_K: x and y must be positive");
  require(s_max > 0.0 && tol > 0.0, "model_kernel_K: s_max and tol must be positive");
  require(g.in_domain(0.0) && g.in_domain(1.0), "model_kernel_K: g must be defined on [0, 1]");
  if (std::fabs(g(1.0)) > 1e-12) throw PreconditionError("model_kernel_K: g(1) != 0, the kernel integral diverges");
  const double two_pi = 2.0 * std::numbers::pi;
  // (y/x)^{±is} = e^{±i s log(y/x)}
  const double l = (sign == Sign::plus ? 1.0 : -1.0) * std::log(y / x);
  quad::AdaptiveOptions opt;
  opt.abs_tol = tol * two_pi * std::sqrt(x * y);
  opt.max_intervals = 20000;
  auto part = [&](bool imag) {
    auto f = [&, imag](double s) {
      const double gs = g(mellin_multiplier(s, Sign::plus));
      return gs * (imag ? std::sin(s * l) : std::cos(s * l));
    };
    return quad::integrate(f, -s_max, s_max, opt, "model_kernel_K").value;
  };
  const double re = part(false);
  const double im = l == 0.0 ? 0.0 : part(true);
  return std::complex<double>(re, im) / (two_pi * std::sqrt(x * y));
}

}  // namespace wtrace::ops
