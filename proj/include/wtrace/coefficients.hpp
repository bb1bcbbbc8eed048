#pragma once

#include <complex>
#include <optional>

#include "wtrace/domain.hpp"
#include "wtrace/symbol.hpp"

namespace wtrace::coeff {

/// A(g; b) = (2 pi)^-2 int_0^1 (g(b t) - t g(b)) / (t (1 - t)) dt, absolute
/// error <= tol.
double coeff_A(const SymbolFunction& g, double b, double tol = 1e-12);
/// Complex b; polynomial and analytic-series g only.
std::complex<double> coeff_A(const SymbolFunction& g, std::complex<double> b, double tol = 1e-12);

/// (2 pi)^-1 int_{-s_max}^{s_max} g(1 / (1 + e^{2 pi s})) ds. Requires g(1) = 0.
double coeff_A_mellin(const SymbolFunction& g, double tol = 1e-12, double s_max = 6.0);

/// Bound on the part of the Mellin integral beyond |s| = s_max.
double mellin_tail_estimate(const SymbolFunction& g, double s_max);

/// A(chi_I; a) for I = (l1, l2), 0 < l1 < l2, in closed form.
double coeff_A_indicator(double l1, double l2, double a);

struct ABoundCheck {
  double value = 0.0;                   ///< |A(g; b)|
  std::optional<double> analytic_bound; ///< (2 pi)^-2 |b| g1(|b|), polynomial/series only
  double smooth_bound = 0.0;            ///< pi^-2 |b| sup |g'| on (-|b|, |b|)
  bool analytic_ok = true;
  bool smooth_ok = true;
};
ABoundCheck check_A_bounds(const SymbolFunction& g, double b);

struct CoefficientValue {
  std::complex<double> value;
  double error = 0.0;
};

struct QuadratureSpec {
  int outer_nodes = 48;      ///< slice-wise volume rule, outer direction
  int inner_nodes = 16;      ///< per slice interval
  int boundary_nodes = 512;  ///< per boundary curve
  std::optional<double> lambda_window;
  std::optional<double> omega_window;
};

/// W0(b; Lambda, Omega) = (2 pi)^-d int_Lambda int_Omega b(x, xi) dxi dx.
CoefficientValue coeff_W0(const ScalarSymbol& b, const geom::Domain& lambda,
                          const geom::Domain& omega, const QuadratureSpec& quad = {});

/// W1 over two boundary quadratures (already built).
std::complex<double> coeff_W1(const ScalarSymbol& b, const geom::BoundaryQuadrature& s,
                              const geom::BoundaryQuadrature& p);

/// W1(b; dLambda, dOmega) = (2 pi)^-(d-1) int int b |n_S . n_P| dS dS. The
/// error is the difference to the run with doubled node counts.
CoefficientValue coeff_W1(const ScalarSymbol& b, const geom::Domain& lambda,
                          const geom::Domain& omega, const QuadratureSpec& quad = {});

}  // namespace wtrace::coeff
