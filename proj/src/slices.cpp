// Slice-wise integration over planar domains: locating the slice positions
// where interval endpoints appear or merge, and integrating across them with
// rules that absorb the power-law behaviour of merging endpoints.

#include <algorithm>
#include <cmath>
#include <limits>

#include "wtrace/domain.hpp"
#include "wtrace/error.hpp"
#include "wtrace/quadrature.hpp"

namespace wtrace::geom {

namespace {

constexpr int kSliceResolution = 512;

// exp_lo / exp_hi: the nearest-neighbour gap behaves like |s - end|^exp at
// that end; 0 marks a regular end.
struct Segment {
  double lo, hi;
  double exp_lo = 0.0, exp_hi = 0.0;
};

double min_gap(const IntervalSet& set) {
  const auto& x = set.interior_endpoints;
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < x.size(); ++i) g = std::min(g, x[i] - x[i - 1]);
  return g;
}

class Slicer {
 public:
  Slicer(const Domain& d, double rho) : domain_(d), rho_(rho) {}
  IntervalSet at(double s) const { return cross_section(domain_, s, rho_, kSliceResolution); }
  double rho() const { return rho_; }

 private:
  const Domain& domain_;
  double rho_;
};

// Endpoint pairs merging at s_star on side `side` make the nearest-neighbour
// gap scale like |s - s_star|^e (e = 1/2 for a smooth tangency, 1/p at the
// flat side of a superellipse). e is read off two offsets a factor 100 apart.
double merging_exponent(const Slicer& slicer, double s_star, double side, double seg_len) {
  const double h1 = std::min(4e-9 * slicer.rho(), seg_len / 400.0);
  const double h2 = 100.0 * h1;
  const double g1 = min_gap(slicer.at(s_star + side * h1));
  const double g2 = min_gap(slicer.at(s_star + side * h2));
  if (!std::isfinite(g1) || !std::isfinite(g2) || g1 <= 0.0) return 0.0;
  const double e = std::log(g2 / g1) / std::log(100.0);
  if (e < 0.05 || e > 0.9) return 0.0;
  // Snap to 1/k: the rules below are exact for that family.
  return 1.0 / std::clamp(std::round(1.0 / e), 2.0, 16.0);
}

std::vector<Segment> segment_slices(const Slicer& slicer, int grid) {
  const double lo = -2.0 * slicer.rho(), hi = 2.0 * slicer.rho();
  std::vector<double> s(grid + 1);
  std::vector<std::size_t> count(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    s[i] = (i == grid) ? hi : lo + (hi - lo) * i / grid;
    count[i] = slicer.at(s[i]).interior_endpoints.size();
  }
  std::vector<double> breaks{lo};
  for (int i = 0; i < grid; ++i) {
    if (count[i] == count[i + 1]) continue;
    double a = s[i], b = s[i + 1];
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (slicer.at(mid).interior_endpoints.size() == count[i])
        a = mid;
      else
        b = mid;
    }
    breaks.push_back(0.5 * (a + b));
  }
  breaks.push_back(hi);

  std::vector<Segment> segs;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    Segment seg{breaks[k], breaks[k + 1]};
    const double len = seg.hi - seg.lo;
    if (len <= 0.0) continue;
    if (k > 0) seg.exp_lo = merging_exponent(slicer, seg.lo, +1.0, len);
    if (k + 2 < breaks.size()) seg.exp_hi = merging_exponent(slicer, seg.hi, -1.0, len);
    segs.push_back(seg);
  }
  return segs;
}

quad::Rule join(quad::Rule left, const quad::Rule& right) {
  left.nodes.insert(left.nodes.end(), right.nodes.begin(), right.nodes.end());
  left.weights.insert(left.weights.end(), right.weights.begin(), right.weights.end());
  return left;
}

// m_delta near merging endpoints: |s - end|^(-e delta) * smooth(s), Gauss-Jacobi
// toward each singular end.
quad::Rule m_delta_rule(const Segment& seg, int n, double delta) {
  const bool lo = seg.exp_lo > 0.0, hi = seg.exp_hi > 0.0;
  if (!lo && !hi) return quad::mapped(quad::gauss_legendre(n), seg.lo, seg.hi);
  if (lo != hi) return quad::endpoint_power_rule(seg.lo, seg.hi, n, -(lo ? seg.exp_lo : seg.exp_hi) * delta, lo);
  const double mid = 0.5 * (seg.lo + seg.hi);
  return join(quad::endpoint_power_rule(seg.lo, mid, n, -seg.exp_lo * delta, true),
              quad::endpoint_power_rule(mid, seg.hi, n, -seg.exp_hi * delta, false));
}

// Slice lengths and slice integrals: smooth(s) + |s - end|^(1/k) * smooth(s).
// s = end +- len t^k makes both pieces smooth in t.
quad::Rule power_map_rule(double lo, double hi, int n, double e, bool singular_at_lo) {
  const quad::Rule& gl = quad::gauss_legendre(n);
  const double k = 1.0 / e, len = hi - lo;
  quad::Rule r;
  r.nodes.resize(gl.size());
  r.weights.resize(gl.size());
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double t = 0.5 * (1.0 + gl.nodes[i]);
    const double u = len * std::pow(t, k);
    r.nodes[i] = singular_at_lo ? lo + u : hi - u;
    r.weights[i] = 0.5 * gl.weights[i] * k * len * std::pow(t, k - 1.0);
  }
  return r;
}

quad::Rule volume_segment_rule(const Segment& seg, int n) {
  const bool lo = seg.exp_lo > 0.0, hi = seg.exp_hi > 0.0;
  if (!lo && !hi) return quad::mapped(quad::gauss_legendre(n), seg.lo, seg.hi);
  if (lo != hi) return power_map_rule(seg.lo, seg.hi, n, lo ? seg.exp_lo : seg.exp_hi, lo);
  const double mid = 0.5 * (seg.lo + seg.hi);
  return join(power_map_rule(seg.lo, mid, n, seg.exp_lo, true), power_map_rule(mid, seg.hi, n, seg.exp_hi, false));
}

}  // namespace

MDeltaIntegral integrate_m_delta(const Domain& omega, double delta, double rho, int quad_points) {
  require(omega.dimension() == 2, "integrate_m_delta: planar domain required");
  require(delta > 0.0 && delta < 2.0, "integrate_m_delta: delta must lie in (0, 2)");
  require(rho > 0.0, "integrate_m_delta: rho must be positive");
  require(quad_points >= 8, "integrate_m_delta: quad_points >= 8");
  Slicer slicer(omega, rho);
  MDeltaIntegral out;
  auto segs = segment_slices(slicer, std::max(quad_points, 128));
  out.transitions = static_cast<int>(segs.size()) - 1;
  for (const Segment& seg : segs) {
    quad::Rule rule = m_delta_rule(seg, quad_points, delta);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      IntervalSet set = slicer.at(rule.nodes[i]);
      if (set.degenerate) ++out.degenerate_slices;
      out.value += rule.weights[i] * m_delta(set, delta);
    }
  }
  return out;
}

VolumeRule volume_rule(const Domain& domain, int outer_nodes, int inner_nodes) {
  require(domain.bounded(), "volume_rule: domain must be bounded");
  require(outer_nodes >= 2 && inner_nodes >= 1, "volume_rule: node counts too small");
  VolumeRule out;
  if (const auto* u = std::get_if<IntervalUnion>(&domain.shape())) {
    std::vector<double> pts, wts;
    for (const auto& iv : u->intervals) {
      quad::Rule r = quad::mapped(quad::gauss_legendre(outer_nodes), iv.left, iv.right);
      pts.insert(pts.end(), r.nodes.begin(), r.nodes.end());
      wts.insert(wts.end(), r.weights.begin(), r.weights.end());
    }
    out.points = Eigen::Map<Mat>(pts.data(), static_cast<Eigen::Index>(pts.size()), 1);
    out.weights = Eigen::Map<Vec>(wts.data(), static_cast<Eigen::Index>(wts.size()));
    return out;
  }
  require(domain.dimension() == 2, "volume_rule: only d = 1 and d = 2 are supported");
  auto [lo, hi] = bounding_box(domain);
  const double extent = std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff());
  const double rho = 0.5 * extent * 1.05 + 1e-12;
  Slicer slicer(domain, rho);
  const quad::Rule& inner = quad::gauss_legendre(inner_nodes);
  std::vector<double> xs, ys, ws;
  for (const Segment& seg : segment_slices(slicer, std::max(outer_nodes, 128))) {
    if (slicer.at(0.5 * (seg.lo + seg.hi)).intervals.empty()) continue;
    quad::Rule rule = volume_segment_rule(seg, outer_nodes);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      IntervalSet set = slicer.at(rule.nodes[i]);
      for (const Interval& iv : set.intervals) {
        quad::Rule r = quad::mapped(inner, iv.left, iv.right);
        for (std::size_t j = 0; j < r.size(); ++j) {
          xs.push_back(rule.nodes[i]);
          ys.push_back(r.nodes[j]);
          ws.push_back(rule.weights[i] * r.weights[j]);
        }
      }
    }
  }
  const Eigen::Index m = static_cast<Eigen::Index>(ws.size());
  out.points.resize(m, 2);
  out.weights.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.points(i, 0) = xs[i];
    out.points(i, 1) = ys[i];
    out.weights(i) = ws[i];
  }
  return out;
}

double measure(const Domain& domain, int outer_nodes, int inner_nodes) {
  if (const auto* u = std::get_if<IntervalUnion>(&domain.shape())) {
    double len = 0.0;
    for (const auto& iv : u->intervals) len += iv.length();
    return len;
  }
  return volume_rule(domain, outer_nodes, inner_nodes).weights.sum();
}

}  // namespace wtrace::geom
