#pragma once

#include <functional>
#include <vector>

namespace wtrace::quad {

/// Nodes and weights of a one-dimensional rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double apply(const std::function<double(double)>& f) const;
};

/// n-point Gauss-Legendre rule on [-1, 1]. Cached; safe to call concurrently.
const Rule& gauss_legendre(int n);

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b,
/// a, b > -1, via Golub-Welsch.
Rule gauss_jacobi(int n, double a, double b);

/// Affine image of a [-1, 1] rule on [lo, hi].
Rule mapped(const Rule& reference, double lo, double hi);

/// `panels` equal Gauss-Legendre panels of `order` nodes each on [lo, hi].
Rule composite_gauss_legendre(double lo, double hi, int panels, int order);

/// Rule for int_lo^hi f(s) ds when f behaves like |s - end|^exponent * smooth
/// near one end. `singular_at_lo` picks which end carries the power.
Rule endpoint_power_rule(double lo, double hi, int n, double exponent, bool singular_at_lo);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  int max_intervals = 5000;
};

/// Globally adaptive bisection with 15-point Gauss-Legendre panels. The local
/// error is |G(I) - G(I_left) - G(I_right)|; the endpoints are never evaluated.
/// Throws NumericError when the interval budget runs out before the tolerance
/// is met; `what` names the caller in the message.
AdaptiveResult integrate(const std::function<double(double)>& f, double a, double b,
                         const AdaptiveOptions& options, const char* what = "integrate");

}  // namespace wtrace::quad
