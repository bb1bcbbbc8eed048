#pragma once

// Reference values computed without the library: closed forms, a tanh-sinh
// integrator, Newton-iterated Gauss-Legendre nodes and Eigen's own
// eigensolver. Tests compare library output against these.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

constexpr double pi = std::numbers::pi;

inline double harmonic(int n) {
  double h = 0.0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  return h;
}

/// A(g; b) for g(t) = sum_m w[m-1] t^m: each power contributes -b^m H_{m-1} / (4 pi^2).
inline double A_polynomial(const std::vector<double>& w, double b) {
  double acc = 0.0;
  for (std::size_t m = 1; m <= w.size(); ++m)
    acc -= w[m - 1] * std::pow(b, static_cast<double>(m)) * harmonic(static_cast<int>(m) - 1);
  return acc / (4.0 * pi * pi);
}

/// A(h; 1) for the binary entropy h.
inline constexpr double A_entropy = 1.0 / 12.0;

/// Tanh-sinh quadrature on (a, b); tolerates integrable endpoint singularities.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, int levels = 7) {
  const double r = 0.5 * (b - a);
  double h = 1.0, sum = 0.0;
  auto term = [&](double t) {
    const double s = 0.5 * pi * std::sinh(t);
    const double x = std::tanh(s);
    const double w = 0.5 * pi * std::cosh(t) / (std::cosh(s) * std::cosh(s));
    // 1 - |x| computed without cancellation.
    const double gap = 1.0 / (std::exp(2.0 * std::fabs(s)) + 1.0) * 2.0;
    if (!(gap > 0.0)) return 0.0;
    const double xa = x > 0 ? b - r * gap : a + r * gap;
    if (xa <= a || xa >= b) return 0.0;
    return w * f(xa);
  };
  sum = term(0.0);
  for (int k = 1; k <= static_cast<int>(4.0 / h); ++k) sum += term(k * h) + term(-k * h);
  double value = sum * h;
  for (int level = 1; level <= levels; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (int k = 1; k <= static_cast<int>(4.0 / h); k += 2) add += term(k * h) + term(-k * h);
    sum += add;
    value = sum * h;
  }
  return r * value;
}

/// A(g; b) by tanh-sinh on the defining integral.
inline double A_tanh_sinh(const std::function<double(double)>& g, double b) {
  const double gb = g(b);
  return tanh_sinh([&](double t) { return (g(b * t) - t * gb) / (t * (1.0 - t)); }, 0.0, 1.0) /
         (4.0 * pi * pi);
}

inline double entropy(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return -t * std::log(t) - (1.0 - t) * std::log(1.0 - t);
}

/// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? z : p1, pm = n == 1 ? 1.0 : p0;
      dp = n * (z * pn - pm) / (z * z - 1.0);
      const double dz = pn / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

/// Eigenvalues of the sine kernel sin(W (x - y)) / (pi (x - y)) on (0, len):
/// composite Gauss-Legendre Nystrom, Eigen's symmetric eigensolver.
inline std::vector<double> sine_kernel_eigenvalues(double W, double len, int panels, int order) {
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  std::vector<double> x, w;
  const double h = len / panels;
  for (int p = 0; p < panels; ++p)
    for (int i = 0; i < order; ++i) {
      x.push_back(p * h + 0.5 * h * (gx[i] + 1.0));
      w.push_back(0.5 * h * gw[i]);
    }
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = x[i] - x[j];
      const double v = i == j ? W / pi : std::sin(W * d) / (pi * d);
      k(i, j) = std::sqrt(w[i] * w[j]) * v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

/// W1 of two circles with radii r and R: (2 pi)^-1 r R int int |cos(t - s)| = 4 r R.
inline double w1_circles(double r, double R) { return 4.0 * r * R; }

/// Brute-force nearest-neighbour spacing functional.
inline double m_delta(const std::vector<double>& x, double rho, double delta) {
  if (x.size() <= 1) return std::pow(4.0 * rho, -delta);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double best = INFINITY;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) best = std::min(best, std::fabs(x[i] - x[j]));
    acc += std::pow(best, -delta);
  }
  return acc;
}

/// int over s in (-2, 2) of m_delta for the unit-disk slices (rho = 1):
/// 2 (2 sqrt(1 - s^2))^-delta on |s| < 1, the empty value 4^-delta elsewhere.
inline double m_delta_unit_disk(double delta) {
  const double beta = std::exp(std::lgamma(0.5) + std::lgamma(1.0 - 0.5 * delta) - std::lgamma(1.5 - 0.5 * delta));
  return 2.0 * std::pow(2.0, -delta) * beta + 2.0 * std::pow(4.0, -delta);
}

/// (2 pi)^-2 int_{|xi| < kF} e^{i xi . d} d xi = kF J1(kF |d|) / (2 pi |d|).
inline double disk_correlation(double kF, double dx, double dy) {
  const double r = std::hypot(dx, dy);
  if (r == 0.0) return kF * kF / (4.0 * pi);
  return kF * std::cyl_bessel_j(1.0, kF * r) / (2.0 * pi * r);
}

/// (2 pi)^-2 int over the star-shaped set {rho < R(theta)} of e^{i xi . d}:
/// closed-form radial integral, trapezoid in theta.
inline std::complex<double> star_correlation(const std::function<double(double)>& R, double dx, double dy,
                                             int n_theta = 4096) {
  using cd = std::complex<double>;
  cd acc = 0.0;
  for (int k = 0; k < n_theta; ++k) {
    const double t = 2.0 * pi * k / n_theta;
    const double c = dx * std::cos(t) + dy * std::sin(t), r = R(t);
    cd inner;
    if (std::fabs(c * r) < 1e-6) {
      inner = cd(0.5 * r * r, c * r * r * r / 3.0);
    } else {
      const cd i(0.0, 1.0);
      inner = std::exp(i * c * r) * (r / (i * c) + 1.0 / (c * c)) - 1.0 / (c * c);
    }
    acc += inner;
  }
  return acc * (2.0 * pi / n_theta) / (4.0 * pi * pi);
}

inline double superellipse_area(double h, int p) {
  return 4.0 * h * h * std::pow(std::tgamma(1.0 + 1.0 / p), 2) / std::tgamma(1.0 + 2.0 / p);
}

/// Area of r = a0 + sum c_k cos k t + s_k sin k t: pi a0^2 + (pi / 2) sum (c_k^2 + s_k^2).
inline double fourier_area(double a0, const std::vector<double>& c, const std::vector<double>& s) {
  double acc = pi * a0 * a0;
  for (double v : c) acc += 0.5 * pi * v * v;
  for (double v : s) acc += 0.5 * pi * v * v;
  return acc;
}

}  // namespace oracle
