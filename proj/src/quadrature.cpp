#include "wtrace/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>

#include "wtrace/error.hpp"

namespace wtrace::quad {

double Rule::apply(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
  return acc;
}

namespace {

Rule compute_gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: n >= 1");
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Rule gauss_jacobi(int n, double a, double b) {
  require(n >= 1, "gauss_jacobi: n >= 1");
  require(a > -1.0 && b > -1.0, "gauss_jacobi: exponents must exceed -1");
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    double s = 2.0 * k + ab;
    diag(k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    double s = 2.0 * k + ab;
    double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
    double den = s * s * (s + 1.0) * (s - 1.0);
    off(k - 1) = std::sqrt(num / den);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) throw NumericError("gauss_jacobi: eigensolver failed");
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = eig.eigenvalues()(k);
    double v = eig.eigenvectors()(0, k);
    r.weights[k] = mu0 * v * v;
  }
  return r;
}

Rule mapped(const Rule& reference, double lo, double hi) {
  Rule r;
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  r.nodes.reserve(reference.size());
  r.weights.reserve(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    r.nodes.push_back(mid + half * reference.nodes[i]);
    r.weights.push_back(half * reference.weights[i]);
  }
  return r;
}

Rule composite_gauss_legendre(double lo, double hi, int panels, int order) {
  require(panels >= 1, "composite_gauss_legendre: panels >= 1");
  const Rule& ref = gauss_legendre(order);
  Rule r;
  r.nodes.reserve(static_cast<std::size_t>(panels) * order);
  r.weights.reserve(static_cast<std::size_t>(panels) * order);
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * h;
    double b = (p + 1 == panels) ? hi : a + h;
    Rule piece = mapped(ref, a, b);
    r.nodes.insert(r.nodes.end(), piece.nodes.begin(), piece.nodes.end());
    r.weights.insert(r.weights.end(), piece.weights.begin(), piece.weights.end());
  }
  return r;
}

Rule endpoint_power_rule(double lo, double hi, int n, double exponent, bool singular_at_lo) {
  // Weight (1+x)^beta puts the power at x = -1; flip the map for the hi end.
  Rule jac = gauss_jacobi(n, 0.0, exponent);
  const double len = hi - lo;
  // |s - end| = len * (1 + x) / 2, so the weight rescales by (len/2)^(exponent+1).
  const double scale = std::pow(0.5 * len, exponent + 1.0);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double u = 0.5 * len * (1.0 + jac.nodes[k]);  // distance from the singular end
    double dist_pow = std::pow(u, exponent);
    r.nodes[k] = singular_at_lo ? lo + u : hi - u;
    // f(s) = |s-end|^e * smooth(s): the Jacobi weight supplies |s-end|^e, so
    // the rule applied to f needs weight / |s-end|^e.
    r.weights[k] = scale * jac.weights[k] / dist_pow;
  }
  return r;
}

AdaptiveResult integrate(const std::function<double(double)>& f, double a, double b,
                         const AdaptiveOptions& options, const char* what) {
  AdaptiveResult out;
  if (a == b) return out;
  const Rule& ref = gauss_legendre(15);
  auto panel = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) acc += ref.weights[i] * f(mid + half * ref.nodes[i]);
    return acc * half;
  };
  struct Piece {
    double lo, hi, whole, left, right, err;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  auto make = [&](double lo, double hi, double whole) {
    const double mid = 0.5 * (lo + hi);
    Piece p{lo, hi, whole, panel(lo, mid), panel(mid, hi), 0.0};
    p.err = std::fabs(p.whole - p.left - p.right);
    return p;
  };
  std::priority_queue<Piece> queue;
  std::vector<Piece> settled;
  Piece first = make(a, b, panel(a, b));
  double total = first.left + first.right;
  double total_err = first.err;
  queue.push(first);
  int count = 1;
  const double width_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::fabs(b - a);
  while (!queue.empty()) {
    double target = std::max(options.abs_tol, options.rel_tol * std::fabs(total));
    if (total_err <= target) break;
    Piece worst = queue.top();
    queue.pop();
    if (worst.hi - worst.lo < width_floor) {
      settled.push_back(worst);
      if (queue.empty()) break;
      continue;
    }
    if (count >= options.max_intervals) {
      throw NumericError(std::string(what) + ": adaptive refinement budget exceeded (error " +
                         std::to_string(total_err) + ")");
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    Piece l = make(worst.lo, mid, worst.left);
    Piece r = make(mid, worst.hi, worst.right);
    total += (l.left + l.right + r.left + r.right) - (worst.left + worst.right);
    total_err += l.err + r.err - worst.err;
    queue.push(l);
    queue.push(r);
    ++count;
  }
  // Re-sum from the pieces to shed accumulated update rounding.
  double value = 0.0, err = 0.0;
  while (!queue.empty()) {
    value += queue.top().left + queue.top().right;
    err += queue.top().err;
    queue.pop();
  }
  for (const Piece& p : settled) {
    value += p.left + p.right;
    err += p.err;
  }
  out.value = value;
  out.error = err;
  out.intervals = count;
  return out;
}

}  // namespace wtrace::quad
