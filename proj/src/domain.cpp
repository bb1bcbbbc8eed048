#include "wtrace/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wtrace/error.hpp"
#include "wtrace/quadrature.hpp"

namespace wtrace::geom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEndpointMergeTol = 1e-10;
constexpr double kTangentTol = 1e-13;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parametric_level(const ParametricBoundary& pb, double x, double y) {
  Eigen::Vector2d q = pb.shape.inverse() * (Eigen::Vector2d(x, y) - pb.center);
  double rad = q.norm();
  double theta = std::atan2(q.y(), q.x());
  return rad - pb.radius.r(theta);
}

double graph_level(const HalfSpaceGraph& g, const Vec& p) {
  Vec local = g.rotation.transpose() * (p - g.offset);
  Vec hat = local.head(g.dim - 1);
  return g.phi.value(hat) - local(g.dim - 1);
}

double box_level(const std::pair<Vec, Vec>& box, const Vec& p) {
  double v = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < p.size(); ++i)
    v = std::max({v, box.first(i) - p(i), p(i) - box.second(i)});
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Radius and graph built-ins

RadiusFunction RadiusFunction::circle(double radius) {
  require(radius > 0.0, "circle: radius must be positive");
  return {[radius](double) { return radius; }, [](double) { return 0.0; },
          "circle(" + std::to_string(radius) + ")", radius};
}

RadiusFunction RadiusFunction::fourier(double a0, std::vector<double> cos_coeffs,
                                       std::vector<double> sin_coeffs) {
  auto r = [a0, cos_coeffs, sin_coeffs](double t) {
    double v = a0;
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k) v += cos_coeffs[k] * std::cos((k + 1.0) * t);
    for (std::size_t k = 0; k < sin_coeffs.size(); ++k) v += sin_coeffs[k] * std::sin((k + 1.0) * t);
    return v;
  };
  auto dr = [cos_coeffs, sin_coeffs](double t) {
    double v = 0.0;
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
      v -= (k + 1.0) * cos_coeffs[k] * std::sin((k + 1.0) * t);
    for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
      v += (k + 1.0) * sin_coeffs[k] * std::cos((k + 1.0) * t);
    return v;
  };
  return {r, dr, "fourier", std::nullopt};
}

RadiusFunction RadiusFunction::superellipse(double half_width, int exponent) {
  require(half_width > 0.0, "superellipse: half width must be positive");
  require(exponent >= 2 && exponent % 2 == 0, "superellipse: exponent must be even and >= 2");
  const double p = exponent;
  auto r = [half_width, p](double t) {
    double u = std::pow(std::cos(t), p) + std::pow(std::sin(t), p);
    return half_width * std::pow(u, -1.0 / p);
  };
  auto dr = [half_width, p](double t) {
    double c = std::cos(t), s = std::sin(t);
    double u = std::pow(c, p) + std::pow(s, p);
    double du = p * (std::pow(s, p - 1.0) * c - std::pow(c, p - 1.0) * s);
    return -half_width / p * std::pow(u, -1.0 / p - 1.0) * du;
  };
  return {r, dr, "superellipse(" + std::to_string(half_width) + "," + std::to_string(exponent) + ")", std::nullopt};
}

Eigen::Vector2d ParametricBoundary::point(double theta) const {
  return shape * (radius.r(theta) * Eigen::Vector2d(std::cos(theta), std::sin(theta))) + center;
}

Eigen::Vector2d ParametricBoundary::tangent(double theta) const {
  const double c = std::cos(theta), s = std::sin(theta);
  const double r = radius.r(theta), dr = radius.dr(theta);
  return shape * Eigen::Vector2d(dr * c - r * s, dr * s + r * c);
}

GraphFunction GraphFunction::flat(int m) {
  return {[](const Vec&) { return 0.0; }, [m](const Vec&) { return Vec::Zero(m).eval(); }, "flat"};
}

GraphFunction GraphFunction::paraboloid(int, double curvature) {
  return {[curvature](const Vec& x) { return 0.5 * curvature * x.squaredNorm(); },
          [curvature](const Vec& x) { return (curvature * x).eval(); }, "paraboloid"};
}

GraphFunction GraphFunction::sine(int m, double amplitude, double frequency) {
  return {[amplitude, frequency](const Vec& x) { return amplitude * std::sin(frequency * x(0)); },
          [m, amplitude, frequency](const Vec& x) {
            Vec g = Vec::Zero(m);
            g(0) = amplitude * frequency * std::cos(frequency * x(0));
            return g;
          },
          "sine"};
}

// ---------------------------------------------------------------------------
// Domain construction

Domain Domain::intervals(std::vector<Interval> intervals) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    require(intervals[i].left < intervals[i].right, "intervals: left < right required");
    if (i > 0)
      require(intervals[i - 1].right <= intervals[i].left,
              "intervals: must be disjoint with increasing endpoints");
  }
  std::ostringstream label;
  label << "intervals";
  for (const auto& iv : intervals) label << "(" << iv.left << "," << iv.right << ")";
  return Domain(1, IntervalUnion{std::move(intervals)}, label.str());
}

Domain Domain::parametric(RadiusFunction radius, Eigen::Matrix2d shape, Eigen::Vector2d center) {
  require(std::fabs(shape.determinant()) > 0.0, "parametric: shape matrix must be invertible");
  double rmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2048; ++i) rmin = std::min(rmin, radius.r(kTwoPi * i / 2048.0));
  require(rmin > 0.0, "parametric: radius function must stay positive");
  std::string label = radius.label;
  if (!shape.isIdentity() || !center.isZero()) label = "affine[" + label + "]";
  return Domain(2, ParametricBoundary{std::move(radius), shape, center}, label);
}

Domain Domain::disk(double radius, Eigen::Vector2d center) {
  return parametric(RadiusFunction::circle(radius), Eigen::Matrix2d::Identity(), center);
}

std::optional<DiskShape> as_disk(const Domain& domain) {
  const auto* pb = std::get_if<ParametricBoundary>(&domain.shape());
  if (!pb || !pb->radius.constant_radius) return std::nullopt;
  const Eigen::Matrix2d g = pb->shape.transpose() * pb->shape;
  const double s2 = 0.5 * g.trace();
  if ((g - s2 * Eigen::Matrix2d::Identity()).norm() > 1e-14 * s2) return std::nullopt;
  return DiskShape{*pb->radius.constant_radius * std::sqrt(s2), pb->center};
}

Domain Domain::ellipse(double semi_x, double semi_y) {
  require(semi_x > 0.0 && semi_y > 0.0, "ellipse: semi-axes must be positive");
  Domain d = parametric(RadiusFunction::circle(1.0), Eigen::Vector2d(semi_x, semi_y).asDiagonal());
  d.label_ = "ellipse(" + std::to_string(semi_x) + "," + std::to_string(semi_y) + ")";
  return d;
}

Domain Domain::graph(GraphFunction phi, Mat rotation, Vec offset) {
  const int dim = static_cast<int>(rotation.rows());
  require(dim >= 2 && rotation.cols() == dim && offset.size() == dim,
          "graph: rotation must be d x d and offset a d-vector, d >= 2");
  require((rotation.transpose() * rotation - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10,
          "graph: rotation must be orthogonal");
  require(std::fabs(phi.value(Vec::Zero(dim - 1))) < 1e-14, "graph: Phi(0) must vanish");
  double grad_sup = 0.0;
  for (int i = -64; i <= 64; ++i) {
    Vec x = Vec::Constant(dim - 1, i / 8.0);
    grad_sup = std::max(grad_sup, phi.gradient(x).norm());
  }
  require(std::isfinite(grad_sup), "graph: gradient of Phi must be bounded");
  std::string label = "graph[" + phi.label + "]";
  return Domain(dim, HalfSpaceGraph{dim, std::move(phi), std::move(rotation), std::move(offset)},
                label);
}

Domain Domain::implicit(int dim, std::function<double(const Vec&)> level,
                        std::optional<std::pair<Vec, Vec>> box, std::string label) {
  require(dim >= 1, "implicit: dimension >= 1");
  if (box) require(box->first.size() == dim && box->second.size() == dim, "implicit: box dimension");
  return Domain(dim, ImplicitLevelSet{dim, std::move(level), std::move(box), label, {}}, label);
}

Domain Domain::annulus(double inner, double outer) {
  require(0.0 < inner && inner < outer, "annulus: 0 < inner < outer");
  auto level = [inner, outer](const Vec& p) {
    double r = p.norm();
    return std::max(inner - r, r - outer);
  };
  Vec lo = Vec::Constant(2, -outer), hi = Vec::Constant(2, outer);
  Domain d = implicit(2, level, std::make_pair(lo, hi),
                      "annulus(" + std::to_string(inner) + "," + std::to_string(outer) + ")");
  auto& s = std::get<ImplicitLevelSet>(d.shape_);
  s.boundary.push_back({RadiusFunction::circle(outer)});
  s.boundary.push_back({RadiusFunction::circle(inner), Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), true});
  return d;
}

Domain Domain::empty(int dim) {
  if (dim == 1) {
    Domain d = intervals({});
    d.label_ = "empty";
    return d;
  }
  return implicit(dim, [](const Vec&) { return 1.0; },
                  std::make_pair(Vec::Constant(dim, -1.0).eval(), Vec::Constant(dim, 1.0).eval()),
                  "empty");
}

bool Domain::bounded() const {
  return std::visit(overloaded{[](const IntervalUnion&) { return true; },
                               [](const ParametricBoundary&) { return true; },
                               [](const HalfSpaceGraph&) { return false; },
                               [](const ImplicitLevelSet& s) { return s.box.has_value(); }},
                    shape_);
}

// ---------------------------------------------------------------------------
// Membership

double level_value(const Domain& domain, const Vec& p) {
  require(p.size() == domain.dimension(), "level_value: dimension mismatch");
  return std::visit(
      overloaded{[&](const IntervalUnion& u) {
                   // Signed distance-like function: negative inside some interval.
                   double best = std::numeric_limits<double>::infinity();
                   for (const auto& iv : u.intervals)
                     best = std::min(best, std::max(iv.left - p(0), p(0) - iv.right));
                   return best;
                 },
                 [&](const ParametricBoundary& pb) { return parametric_level(pb, p(0), p(1)); },
                 [&](const HalfSpaceGraph& g) { return graph_level(g, p); },
                 [&](const ImplicitLevelSet& s) {
                   double v = s.level(p);
                   if (s.box) v = std::max(v, box_level(*s.box, p));
                   return v;
                 }},
      domain.shape());
}

bool contains(const Domain& domain, const Vec& point) {
  if (point.size() != domain.dimension()) throw PreconditionError("contains: dimension mismatch");
  return level_value(domain, point) < 0.0;
}

std::pair<Vec, Vec> bounding_box(const Domain& domain) {
  return std::visit(
      overloaded{
          [&](const IntervalUnion& u) -> std::pair<Vec, Vec> {
            require(!u.intervals.empty(), "bounding_box: empty interval union");
            return {Vec::Constant(1, u.intervals.front().left),
                    Vec::Constant(1, u.intervals.back().right)};
          },
          [&](const ParametricBoundary& pb) -> std::pair<Vec, Vec> {
            Vec lo = Vec::Constant(2, std::numeric_limits<double>::infinity());
            Vec hi = -lo;
            for (int i = 0; i < 4096; ++i) {
              Eigen::Vector2d q = pb.point(kTwoPi * i / 4096.0);
              lo = lo.cwiseMin(Vec(q));
              hi = hi.cwiseMax(Vec(q));
            }
            Vec pad = Vec::Constant(2, 1e-3 * (hi - lo).maxCoeff());
            return {lo - pad, hi + pad};
          },
          [&](const HalfSpaceGraph&) -> std::pair<Vec, Vec> {
            throw PreconditionError("bounding_box: graph-type domains are unbounded");
          },
          [&](const ImplicitLevelSet& s) -> std::pair<Vec, Vec> {
            if (!s.box) throw PreconditionError("bounding_box: level set has no bounding box");
            return *s.box;
          }},
      domain.shape());
}

// ---------------------------------------------------------------------------
// Cross sections

namespace {

template <class F>
double bisect_root(const F& f, double a, double b) {
  bool neg_a = f(a) < 0.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if ((f(mid) < 0.0) == neg_a)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

// Minimizes phi on [a, b] by golden section; returns the argmin.
template <class F>
double golden_min(const F& phi, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = phi(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace

IntervalSet cross_section(const Domain& omega, const Vec& xi_hat, double rho, int resolution) {
  const int dim = omega.dimension();
  require(dim >= 2, "cross_section: domain dimension must be >= 2");
  require(xi_hat.size() == dim - 1, "cross_section: xi_hat must have d-1 components");
  require(rho > 0.0, "cross_section: rho must be positive");
  require(resolution >= 16, "cross_section: resolution must be >= 16");

  Vec p(dim);
  p.head(dim - 1) = xi_hat;
  std::function<double(double)> level;
  if (const auto* pb = std::get_if<ParametricBoundary>(&omega.shape())) {
    const double x = xi_hat(0);
    level = [pb, x](double t) { return parametric_level(*pb, x, t); };
  } else {
    level = [&omega, &p, dim](double t) {
      Vec q = p;
      q(dim - 1) = t;
      return level_value(omega, q);
    };
  }

  const double lo = -2.0 * rho, hi = 2.0 * rho;
  const double h = (hi - lo) / resolution;
  std::vector<double> ts(resolution + 1), fs(resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    ts[i] = (i == resolution) ? hi : lo + i * h;
    fs[i] = level(ts[i]);
  }

  IntervalSet out;
  out.rho = rho;
  std::vector<double> roots;
  for (int i = 0; i < resolution; ++i) {
    if ((fs[i] < 0.0) != (fs[i + 1] < 0.0)) roots.push_back(bisect_root(level, ts[i], ts[i + 1]));
  }

  // Hidden root pairs: a sampled local minimum of |F| with no adjacent sign
  // change may hide a dip through zero between the samples.
  for (int i = 0; i <= resolution; ++i) {
    const double ai = std::fabs(fs[i]);
    const bool left_ok = (i == 0) || ai < std::fabs(fs[i - 1]);
    const bool right_ok = (i == resolution) || ai <= std::fabs(fs[i + 1]);
    if (!left_ok || !right_ok) continue;
    const int il = std::max(i - 1, 0), ir = std::min(i + 1, resolution);
    const bool sign_change = ((fs[il] < 0.0) != (fs[i] < 0.0)) || ((fs[ir] < 0.0) != (fs[i] < 0.0));
    if (sign_change) continue;
    const double sigma = fs[i] < 0.0 ? -1.0 : 1.0;
    auto phi = [&](double t) { return sigma * level(t); };
    const double t_star = golden_min(phi, ts[il], ts[ir]);
    const double v_star = phi(t_star);
    if (v_star < 0.0) {
      const double r1 = bisect_root(level, ts[il], t_star);
      const double r2 = bisect_root(level, t_star, ts[ir]);
      if (r2 - r1 < kEndpointMergeTol) {
        out.degenerate = true;
      } else {
        roots.push_back(r1);
        roots.push_back(r2);
      }
    } else if (v_star <= kTangentTol) {
      out.degenerate = true;
    }
  }
  std::sort(roots.begin(), roots.end());

  // Coincident endpoints toggle the region twice; drop both and flag.
  std::vector<double> clean;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i + 1 < roots.size() && roots[i + 1] - roots[i] < kEndpointMergeTol) {
      out.degenerate = true;
      ++i;
      continue;
    }
    clean.push_back(roots[i]);
  }

  bool inside = fs[0] < 0.0;
  double start = lo;
  for (double r : clean) {
    if (inside) out.intervals.push_back({start, r});
    inside = !inside;
    start = r;
  }
  if (inside) out.intervals.push_back({start, hi});
  for (double r : clean)
    if (r > lo && r < hi) out.interior_endpoints.push_back(r);
  return out;
}

IntervalSet cross_section(const Domain& omega, double xi_hat, double rho, int resolution) {
  return cross_section(omega, Vec::Constant(1, xi_hat), rho, resolution);
}

double m_delta(std::span<const double> x, double rho, double delta) {
  require(rho > 0.0, "m_delta: rho must be positive");
  require(delta >= 0.0, "m_delta: delta must be nonnegative");
  if (x.size() <= 1) return std::pow(4.0 * rho, -delta);
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double gap = std::numeric_limits<double>::infinity();
    if (j > 0) gap = std::min(gap, x[j] - x[j - 1]);
    if (j + 1 < x.size()) gap = std::min(gap, x[j + 1] - x[j]);
    acc += std::pow(gap, -delta);
  }
  return acc;
}

double m_delta(const IntervalSet& set, double delta) {
  require(delta > 0.0 && delta < 2.0, "m_delta: delta must lie in (0, 2)");
  return m_delta(set.interior_endpoints, set.rho, delta);
}

// ---------------------------------------------------------------------------
// Boundary quadrature

namespace {

BoundaryQuadrature curve_quadrature(const ParametricBoundary& pb, int n) {
  BoundaryQuadrature q;
  require(n >= 8, "boundary_quadrature: n >= 8");
  const double orient = (pb.shape.determinant() > 0.0) != pb.hole ? 1.0 : -1.0;
  q.points.resize(n, 2);
  q.normals.resize(n, 2);
  q.weights.resize(n);
  for (int j = 0; j < n; ++j) {
    const double theta = kTwoPi * j / n;
    Eigen::Vector2d pt = pb.point(theta);
    Eigen::Vector2d tg = pb.tangent(theta);
    const double speed = tg.norm();
    q.points.row(j) = pt.transpose();
    q.normals(j, 0) = orient * tg.y() / speed;
    q.normals(j, 1) = -orient * tg.x() / speed;
    q.weights(j) = speed * kTwoPi / n;
  }
  return q;
}

}  // namespace

BoundaryQuadrature boundary_quadrature(const Domain& domain, int n, std::optional<double> window) {
  BoundaryQuadrature q;
  std::visit(
      overloaded{
          [&](const IntervalUnion& u) {
            const Eigen::Index m = 2 * static_cast<Eigen::Index>(u.intervals.size());
            q.points.resize(m, 1);
            q.normals.resize(m, 1);
            q.weights = Vec::Ones(m);
            for (std::size_t i = 0; i < u.intervals.size(); ++i) {
              q.points(2 * i, 0) = u.intervals[i].left;
              q.normals(2 * i, 0) = -1.0;
              q.points(2 * i + 1, 0) = u.intervals[i].right;
              q.normals(2 * i + 1, 0) = 1.0;
            }
          },
          [&](const ParametricBoundary& pb) { q = curve_quadrature(pb, n); },
          [&](const HalfSpaceGraph& g) {
            require(window.has_value() && *window > 0.0,
                    "boundary_quadrature: graph boundaries need an explicit truncation window");
            require(g.dim == 2, "boundary_quadrature: graph boundaries supported for d = 2 only");
            require(n >= 8, "boundary_quadrature: n >= 8");
            const int order = 16;
            const int panels = std::max(1, (n + order - 1) / order);
            quad::Rule rule = quad::composite_gauss_legendre(-*window, *window, panels, order);
            const Eigen::Index m = static_cast<Eigen::Index>(rule.size());
            q.points.resize(m, 2);
            q.normals.resize(m, 2);
            q.weights.resize(m);
            for (Eigen::Index j = 0; j < m; ++j) {
              Vec s = Vec::Constant(1, rule.nodes[j]);
              const double phi = g.phi.value(s), dphi = g.phi.gradient(s)(0);
              const double stretch = std::sqrt(1.0 + dphi * dphi);
              Vec local(2), nrm(2);
              local << rule.nodes[j], phi;
              nrm << dphi / stretch, -1.0 / stretch;
              q.points.row(j) = (g.rotation * local + g.offset).transpose();
              q.normals.row(j) = (g.rotation * nrm).transpose();
              q.weights(j) = stretch * rule.weights[j];
            }
          },
          [&](const ImplicitLevelSet& s) {
            require(!s.boundary.empty(),
                    "boundary_quadrature: level-set domain '" + domain.label() + "' has no parametrized boundary");
            std::vector<BoundaryQuadrature> parts;
            Eigen::Index m = 0;
            for (const auto& c : s.boundary) {
              parts.push_back(curve_quadrature(c, n));
              m += static_cast<Eigen::Index>(parts.back().size());
            }
            q.points.resize(m, 2);
            q.normals.resize(m, 2);
            q.weights.resize(m);
            Eigen::Index at = 0;
            for (const auto& part : parts) {
              const Eigen::Index k = static_cast<Eigen::Index>(part.size());
              q.points.middleRows(at, k) = part.points;
              q.normals.middleRows(at, k) = part.normals;
              q.weights.segment(at, k) = part.weights;
              at += k;
            }
          }},
      domain.shape());
  return q;
}

// ---------------------------------------------------------------------------
// Affine maps

Mat pullback_matrix(const AffineMap& map) {
  if (map.side == AffineMap::Side::x_side) return map.matrix;
  return map.matrix.transpose().inverse();
}

Domain affine_image(const Domain& domain, const AffineMap& map) {
  const int dim = domain.dimension();
  require(map.matrix.rows() == dim && map.matrix.cols() == dim && map.translation.size() == dim,
          "affine_image: map dimension mismatch");
  require(std::fabs(map.matrix.determinant()) > 0.0, "affine_image: map must be invertible");
  const Mat N = pullback_matrix(map);
  const Vec k = map.translation;
  return std::visit(
      overloaded{
          [&](const IntervalUnion& u) {
            std::vector<Interval> out;
            const double n = N(0, 0), kk = k(0);
            for (const auto& iv : u.intervals) {
              double a = (iv.left - kk) / n, b = (iv.right - kk) / n;
              out.push_back({std::min(a, b), std::max(a, b)});
            }
            std::sort(out.begin(), out.end(),
                      [](const Interval& x, const Interval& y) { return x.left < y.left; });
            return Domain::intervals(std::move(out));
          },
          [&](const ParametricBoundary& pb) {
            Eigen::Matrix2d Ninv = Eigen::Matrix2d(N).inverse();
            Eigen::Vector2d kv(k(0), k(1));
            return Domain::parametric(pb.radius, Ninv * pb.shape, Ninv * (pb.center - kv));
          },
          [&](const HalfSpaceGraph&) {
            auto level = [domain, N, k](const Vec& y) { return level_value(domain, N * y + k); };
            return Domain::implicit(dim, level, std::nullopt, "affine[" + domain.label() + "]");
          },
          [&](const ImplicitLevelSet& s) {
            auto level = [domain, N, k](const Vec& y) { return level_value(domain, N * y + k); };
            std::optional<std::pair<Vec, Vec>> box;
            if (s.box) {
              const Mat Ninv = N.inverse();
              Vec lo = Vec::Constant(dim, std::numeric_limits<double>::infinity()), hi = -lo;
              for (int corner = 0; corner < (1 << dim); ++corner) {
                Vec c(dim);
                for (int i = 0; i < dim; ++i)
                  c(i) = (corner >> i & 1) ? s.box->second(i) : s.box->first(i);
                Vec img = Ninv * (c - k);
                lo = lo.cwiseMin(img);
                hi = hi.cwiseMax(img);
              }
              box = std::make_pair(lo, hi);
            }
            Domain out = Domain::implicit(dim, level, box, "affine[" + domain.label() + "]");
            if (dim == 2) {
              const Eigen::Matrix2d Ninv = N.inverse();
              const Eigen::Vector2d kv(k(0), k(1));
              auto& curves = std::get<ImplicitLevelSet>(out.shape_).boundary;
              for (const auto& c : s.boundary) curves.push_back({c.radius, Ninv * c.shape, Ninv * (c.center - kv), c.hole});
            }
            return out;
          }},
      domain.shape());
}

CurvatureBounds curvature_bounds(const Domain& domain, int samples) {
  const auto* pb = std::get_if<ParametricBoundary>(&domain.shape());
  require(pb != nullptr, "curvature_bounds: parametric boundary required");
  require(samples >= 64, "curvature_bounds: samples >= 64");
  const double fd = 1e-5;
  std::vector<double> kappa(samples), speed(samples);
  for (int i = 0; i < samples; ++i) {
    const double t = kTwoPi * i / samples;
    Eigen::Vector2d d1 = pb->tangent(t);
    Eigen::Vector2d d2 = (pb->tangent(t + fd) - pb->tangent(t - fd)) / (2.0 * fd);
    speed[i] = d1.norm();
    kappa[i] = (d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(speed[i], 3);
  }
  CurvatureBounds out;
  const double dt = kTwoPi / samples;
  for (int i = 0; i < samples; ++i) {
    out.max_curvature = std::max(out.max_curvature, std::fabs(kappa[i]));
    const double dk = (kappa[(i + 1) % samples] - kappa[(i + samples - 1) % samples]) / (2.0 * dt);
    out.max_curvature_rate = std::max(out.max_curvature_rate, std::fabs(dk) / speed[i]);
  }
  return out;
}

}  // namespace wtrace::geom
