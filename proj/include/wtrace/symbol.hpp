#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wtrace {

/// Majorants of an analytic g used by the analytic A-bound:
///   g1(t) = sum_{m>=2} (m-1)|w_m| t^{m-1},  g2(t) = sum_{m>=2} m(m-1)|w_m| t^{m-2}.
struct DerivedMajorants {
  std::vector<double> coefficients;  // w_1, w_2, ...
  double g1(double t) const;
  double g2(double t) const;
};

/// Test function g with g(0) = 0, applied to operator spectra.
class SymbolFunction {
 public:
  enum class Kind { polynomial, analytic_series, smooth };
  using Fn = std::function<double(double)>;

  /// g(t) = sum_{m=1..p} coeffs[m-1] t^m
  static SymbolFunction polynomial(std::vector<double> coeffs);
  static SymbolFunction power(int p);
  /// Truncated power series with a stated radius of convergence.
  static SymbolFunction series(std::vector<double> coeffs, double radius);
  /// Smooth g on [lo, hi]; |g(0)| must be below 1e-12.
  static SymbolFunction smooth(std::string name, Fn value, Fn derivative, double lo, double hi);
  /// h(t) = -t log t - (1-t) log(1-t) on [0, 1].
  static SymbolFunction entropy();
  /// C-infinity approximation of the indicator of (l1, l2): equal to 1 on
  /// [l1 + width/2, l2 - width/2] and 0 outside (l1 - width/2, l2 + width/2).
  static SymbolFunction mollified_indicator(double l1, double l2, double width);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double operator()(double t) const;
  double derivative(double t) const;
  bool in_domain(double t) const;
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  /// Power coefficients w_1.. for polynomial and series kinds, empty otherwise.
  std::span<const double> coefficients() const { return coeffs_; }
  std::optional<double> radius() const { return radius_; }
  std::optional<DerivedMajorants> majorants() const;
  bool is_entropy() const { return entropy_; }

 private:
  SymbolFunction() = default;
  Kind kind_ = Kind::polynomial;
  std::string name_;
  std::vector<double> coeffs_;
  std::optional<double> radius_;
  Fn value_, derivative_;
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();
  bool entropy_ = false;
};

/// Symbol a(x, xi) of the quantized operator. Points are passed as spans so
/// d = 1 callers need no allocation.
class ScalarSymbol {
 public:
  using Fn = std::function<std::complex<double>(std::span<const double>, std::span<const double>)>;

  struct Support {
    bool everywhere = true;
    std::vector<double> x_center, xi_center;
    double x_radius = 0.0, xi_radius = 0.0;
  };

  static ScalarSymbol constant(std::complex<double> value);
  /// x-independent symbol a(xi) (a Fourier multiplier).
  static ScalarSymbol multiplier(std::string name, std::function<std::complex<double>(double)> a);
  /// General symbol; `support` must contain the set where a != 0.
  static ScalarSymbol general(std::string name, Fn a, Support support);

  std::complex<double> operator()(std::span<const double> x, std::span<const double> xi) const;
  std::complex<double> at(double x, double xi) const;  ///< d = 1
  bool is_constant() const { return constant_.has_value(); }
  std::complex<double> constant_value() const { return constant_.value_or(0.0); }
  bool depends_on_x() const { return depends_on_x_; }
  const Support& support() const { return support_; }
  const std::string& name() const { return name_; }
  /// Symbol with a replaced by Re a.
  ScalarSymbol real_part() const;
  /// Samples |a| outside the declared support; returns the largest value seen.
  double max_outside_support(int dim, int samples, unsigned seed) const;

 private:
  std::string name_;
  Fn fn_;
  Support support_;
  std::optional<std::complex<double>> constant_;
  bool depends_on_x_ = false;
};

}  // namespace wtrace
