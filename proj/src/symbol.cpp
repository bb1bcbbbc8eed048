#include "wtrace/symbol.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "wtrace/error.hpp"

namespace wtrace {

double DerivedMajorants::g1(double t) const {
  double v = 0.0;
  for (std::size_t i = 1; i < coefficients.size(); ++i) {
    const double m = i + 1.0;
    v += (m - 1.0) * std::fabs(coefficients[i]) * std::pow(t, m - 1.0);
  }
  return v;
}

double DerivedMajorants::g2(double t) const {
  double v = 0.0;
  for (std::size_t i = 1; i < coefficients.size(); ++i) {
    const double m = i + 1.0;
    v += m * (m - 1.0) * std::fabs(coefficients[i]) * std::pow(t, m - 2.0);
  }
  return v;
}

namespace {

double horner(std::span<const double> c, double t) {
  double h = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) h = h * t + c[k];
  return h * t;
}

double horner_derivative(std::span<const double> c, double t) {
  double h = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) h = h * t + (k + 1.0) * c[k];
  return h;
}

// exp(-1/x) for x > 0, else 0, and the smooth step built from it.
double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
double dbump(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = bump(x), b = bump(1.0 - x);
  return a / (a + b);
}
double smooth_step_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = bump(x), b = bump(1.0 - x);
  const double da = dbump(x), db = -dbump(1.0 - x);
  return (da * b - a * db) / ((a + b) * (a + b));
}

}  // namespace

SymbolFunction SymbolFunction::polynomial(std::vector<double> coeffs) {
  require(!coeffs.empty(), "polynomial: at least one coefficient");
  SymbolFunction g;
  g.kind_ = Kind::polynomial;
  std::ostringstream name;
  name << "poly[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) name << (i ? "," : "") << coeffs[i];
  name << "]";
  g.name_ = name.str();
  g.coeffs_ = std::move(coeffs);
  return g;
}

SymbolFunction SymbolFunction::power(int p) {
  require(p >= 1, "power: p >= 1");
  std::vector<double> c(p, 0.0);
  c[p - 1] = 1.0;
  SymbolFunction g = polynomial(std::move(c));
  g.name_ = "t^" + std::to_string(p);
  return g;
}

SymbolFunction SymbolFunction::series(std::vector<double> coeffs, double radius) {
  require(!coeffs.empty(), "series: at least one coefficient");
  require(radius > 0.0, "series: radius must be positive");
  SymbolFunction g = polynomial(std::move(coeffs));
  g.kind_ = Kind::analytic_series;
  g.radius_ = radius;
  g.name_ = "series" + g.name_.substr(4);
  g.lo_ = -radius;
  g.hi_ = radius;
  return g;
}

SymbolFunction SymbolFunction::smooth(std::string name, Fn value, Fn derivative, double lo,
                                      double hi) {
  require(lo <= 0.0 && 0.0 <= hi && lo < hi, "smooth: interval must contain 0");
  require(std::fabs(value(0.0)) < 1e-12, "smooth: g(0) must vanish");
  SymbolFunction g;
  g.kind_ = Kind::smooth;
  g.name_ = std::move(name);
  g.value_ = std::move(value);
  g.derivative_ = std::move(derivative);
  g.lo_ = lo;
  g.hi_ = hi;
  return g;
}

SymbolFunction SymbolFunction::entropy() {
  auto h = [](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return -t * std::log(t) - (1.0 - t) * std::log1p(-t);
  };
  auto dh = [](double t) { return std::log1p(-t) - std::log(t); };
  SymbolFunction g = smooth("entropy", h, dh, 0.0, 1.0);
  g.entropy_ = true;
  return g;
}

SymbolFunction SymbolFunction::mollified_indicator(double l1, double l2, double width) {
  require(l1 < l2 && width > 0.0, "mollified_indicator: need l1 < l2 and width > 0");
  require(width < l2 - l1, "mollified_indicator: width must be below the interval length");
  auto g = [=](double t) {
    return smooth_step((t - l1) / width + 0.5) * smooth_step((l2 - t) / width + 0.5);
  };
  auto dg = [=](double t) {
    const double u = (t - l1) / width + 0.5, v = (l2 - t) / width + 0.5;
    return (smooth_step_derivative(u) * smooth_step(v) - smooth_step(u) * smooth_step_derivative(v)) /
           width;
  };
  std::ostringstream name;
  name << "indicator(" << l1 << "," << l2 << "," << width << ")";
  return smooth(name.str(), g, dg, -std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity());
}

bool SymbolFunction::in_domain(double t) const {
  if (kind_ == Kind::polynomial) return std::isfinite(t);
  if (kind_ == Kind::analytic_series) return std::fabs(t) < *radius_;
  return t >= lo_ && t <= hi_;
}

double SymbolFunction::operator()(double t) const {
  if (kind_ == Kind::analytic_series && !(std::fabs(t) < *radius_))
    throw PreconditionError(name_ + ": evaluation outside the radius of convergence");
  if (kind_ == Kind::smooth) {
    if (t < lo_ || t > hi_) throw PreconditionError(name_ + ": argument outside the domain");
    return value_(t);
  }
  return horner(coeffs_, t);
}

double SymbolFunction::derivative(double t) const {
  if (kind_ == Kind::analytic_series && !(std::fabs(t) < *radius_))
    throw PreconditionError(name_ + ": evaluation outside the radius of convergence");
  if (kind_ == Kind::smooth) {
    if (t < lo_ || t > hi_) throw PreconditionError(name_ + ": argument outside the domain");
    return derivative_(t);
  }
  return horner_derivative(coeffs_, t);
}

std::optional<DerivedMajorants> SymbolFunction::majorants() const {
  if (kind_ == Kind::smooth) return std::nullopt;
  return DerivedMajorants{coeffs_};
}

// ---------------------------------------------------------------------------

ScalarSymbol ScalarSymbol::constant(std::complex<double> value) {
  ScalarSymbol a;
  std::ostringstream name;
  name << "const(" << value.real();
  if (value.imag() != 0.0) name << (value.imag() > 0 ? "+" : "") << value.imag() << "i";
  name << ")";
  a.name_ = name.str();
  a.fn_ = [value](std::span<const double>, std::span<const double>) { return value; };
  a.constant_ = value;
  return a;
}

ScalarSymbol ScalarSymbol::multiplier(std::string name, std::function<std::complex<double>(double)> f) {
  ScalarSymbol a;
  a.name_ = std::move(name);
  a.fn_ = [f](std::span<const double>, std::span<const double> xi) { return f(xi[0]); };
  return a;
}

ScalarSymbol ScalarSymbol::general(std::string name, Fn fn, Support support) {
  ScalarSymbol a;
  a.name_ = std::move(name);
  a.fn_ = std::move(fn);
  a.support_ = std::move(support);
  a.depends_on_x_ = true;
  return a;
}

std::complex<double> ScalarSymbol::operator()(std::span<const double> x,
                                              std::span<const double> xi) const {
  return fn_(x, xi);
}

std::complex<double> ScalarSymbol::at(double x, double xi) const {
  return fn_(std::span<const double>(&x, 1), std::span<const double>(&xi, 1));
}

ScalarSymbol ScalarSymbol::real_part() const {
  ScalarSymbol a = *this;
  a.name_ = "Re[" + name_ + "]";
  Fn inner = fn_;
  a.fn_ = [inner](std::span<const double> x, std::span<const double> xi) {
    return std::complex<double>(inner(x, xi).real(), 0.0);
  };
  if (constant_) a.constant_ = std::complex<double>(constant_->real(), 0.0);
  return a;
}

double ScalarSymbol::max_outside_support(int dim, int samples, unsigned seed) const {
  if (support_.everywhere) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(1.0, 3.0);
  double worst = 0.0;
  std::vector<double> x(dim), xi(dim);
  for (int s = 0; s < samples; ++s) {
    // Pick one of the two factors to lie outside its ball.
    const bool x_outside = (s % 2 == 0);
    auto draw = [&](std::vector<double>& p, const std::vector<double>& c, double r, bool outside) {
      double norm = 0.0;
      for (int i = 0; i < dim; ++i) {
        p[i] = normal(rng);
        norm += p[i] * p[i];
      }
      norm = std::sqrt(norm);
      const double radius = outside ? r * unif(rng) : r * std::uniform_real_distribution<double>(0, 1)(rng);
      for (int i = 0; i < dim; ++i) p[i] = c[i] + radius * p[i] / norm;
    };
    draw(x, support_.x_center, support_.x_radius, x_outside);
    draw(xi, support_.xi_center, support_.xi_radius, !x_outside);
    worst = std::max(worst, std::abs(fn_(x, xi)));
  }
  return worst;
}

}  // namespace wtrace
