#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wtrace::geom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Interval {
  double left = 0.0;
  double right = 0.0;
  double length() const { return right - left; }
};

/// Finite union of disjoint open intervals (d = 1).
struct IntervalUnion {
  std::vector<Interval> intervals;
};

/// Star-shaped radius function r(theta) > 0 with its derivative.
struct RadiusFunction {
  std::function<double(double)> r;
  std::function<double(double)> dr;
  std::string label;
  std::optional<double> constant_radius;  ///< set for circles

  static RadiusFunction circle(double radius);
  /// r(theta) = a0 + sum_k cos_k cos(k theta) + sin_k sin(k theta), k = 1, 2, ...
  static RadiusFunction fourier(double a0, std::vector<double> cos_coeffs,
                                std::vector<double> sin_coeffs);
  /// |x|^p + |y|^p = h^p with even p >= 2; a rounded square for large p.
  static RadiusFunction superellipse(double half_width, int exponent);
};

/// Closed curve theta -> shape * r(theta) (cos theta, sin theta) + center.
struct ParametricBoundary {
  RadiusFunction radius;
  Eigen::Matrix2d shape = Eigen::Matrix2d::Identity();
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  bool hole = false;  ///< the region lies outside the curve

  Eigen::Vector2d point(double theta) const;
  Eigen::Vector2d tangent(double theta) const;  ///< d point / d theta
};

/// Graph function Phi: R^{d-1} -> R with its gradient.
struct GraphFunction {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::string label;

  static GraphFunction flat(int dim_minus_one);
  /// Phi(x) = curvature * |x|^2 / 2
  static GraphFunction paraboloid(int dim_minus_one, double curvature);
  /// Phi(x) = amplitude * sin(frequency * x_1)
  static GraphFunction sine(int dim_minus_one, double amplitude, double frequency);
};

/// Region rotation * {x : x_d > Phi(x_hat)} + offset.
struct HalfSpaceGraph {
  int dim = 2;
  GraphFunction phi;
  Mat rotation;
  Vec offset;
};

/// Region {x : level(x) < 0}, optionally confined to a bounding box.
struct ImplicitLevelSet {
  int dim = 2;
  std::function<double(const Vec&)> level;
  std::optional<std::pair<Vec, Vec>> box;
  std::string label;
  /// Optional parametrization of the boundary, one closed curve per
  /// component. A curve with det(shape) < 0 has its normals flipped, which is
  /// how holes get outward (away from the region) normals.
  std::vector<ParametricBoundary> boundary;
};

struct AffineMap;

class Domain {
 public:
  using Shape = std::variant<IntervalUnion, ParametricBoundary, HalfSpaceGraph, ImplicitLevelSet>;

  static Domain intervals(std::vector<Interval> intervals);
  static Domain parametric(RadiusFunction radius,
                           Eigen::Matrix2d shape = Eigen::Matrix2d::Identity(),
                           Eigen::Vector2d center = Eigen::Vector2d::Zero());
  static Domain disk(double radius, Eigen::Vector2d center = Eigen::Vector2d::Zero());
  /// Axis-aligned ellipse with the given semi-axes.
  static Domain ellipse(double semi_x, double semi_y);
  static Domain graph(GraphFunction phi, Mat rotation, Vec offset);
  static Domain implicit(int dim, std::function<double(const Vec&)> level,
                         std::optional<std::pair<Vec, Vec>> box, std::string label = "implicit");
  /// 0 < inner < |x| < outer
  static Domain annulus(double inner, double outer);
  static Domain empty(int dim);

  int dimension() const { return dim_; }
  const Shape& shape() const { return shape_; }
  const std::string& label() const { return label_; }
  bool bounded() const;

  friend Domain affine_image(const Domain& domain, const AffineMap& map);

 private:
  Domain(int dim, Shape shape, std::string label)
      : dim_(dim), shape_(std::move(shape)), label_(std::move(label)) {}
  int dim_;
  Shape shape_;
  std::string label_;
};

struct DiskShape {
  double radius;
  Eigen::Vector2d center;
};
/// Radius and centre when the domain is a round disk (possibly after a
/// similarity transform).
std::optional<DiskShape> as_disk(const Domain& domain);

/// Open-region membership.
bool contains(const Domain& domain, const Vec& point);

/// Signed level function, negative exactly inside (d >= 2 shapes).
double level_value(const Domain& domain, const Vec& point);

/// Axis-aligned box containing the closure of a bounded domain.
std::pair<Vec, Vec> bounding_box(const Domain& domain);

/// Components of a one-dimensional slice inside the window (-2 rho, 2 rho).
struct IntervalSet {
  std::vector<Interval> intervals;
  double rho = 1.0;
  std::vector<double> interior_endpoints;  ///< sorted, strictly inside the window
  bool degenerate = false;                 ///< tangential or coincident endpoints seen
};

/// Slice {t in (-2 rho, 2 rho) : (xi_hat, t) in omega}.
IntervalSet cross_section(const Domain& omega, const Vec& xi_hat, double rho, int resolution);
IntervalSet cross_section(const Domain& omega, double xi_hat, double rho, int resolution);

/// Spacing functional of a finite point set inside (-2 rho, 2 rho).
double m_delta(std::span<const double> sorted_points, double rho, double delta);
double m_delta(const IntervalSet& set, double delta);

struct MDeltaIntegral {
  double value = 0.0;
  int degenerate_slices = 0;
  int transitions = 0;
};

/// int over xi_hat in (-2 rho, 2 rho) of m_delta(cross_section(omega, xi_hat)).
MDeltaIntegral integrate_m_delta(const Domain& omega, double delta, double rho, int quad_points);

/// Points, outward unit normals and surface weights on a boundary. Row i of
/// `points` and `normals` is node i; columns are coordinates.
struct BoundaryQuadrature {
  Mat points;
  Mat normals;
  Vec weights;
  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
  int dimension() const { return static_cast<int>(points.cols()); }
};

/// `window` is the half-width of the truncation used for graph boundaries and
/// must be given for them; it is ignored otherwise.
BoundaryQuadrature boundary_quadrature(const Domain& domain, int n,
                                       std::optional<double> window = std::nullopt);

/// Volume quadrature: row i of `points` with weight i.
struct VolumeRule {
  Mat points;
  Vec weights;
  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
};

/// Tensor Gauss rule per interval (d = 1) or slice-wise rule (d = 2): outer
/// nodes along x_1 split at slice transitions with square-root end treatment,
/// inner Gauss-Legendre nodes on every slice interval.
VolumeRule volume_rule(const Domain& domain, int outer_nodes, int inner_nodes);

/// Lebesgue measure (length, area) via volume_rule or exactly for intervals.
double measure(const Domain& domain, int outer_nodes = 48, int inner_nodes = 16);

struct AffineMap {
  enum class Side { x_side, xi_side };
  Mat matrix;
  Vec translation;
  Side side = Side::x_side;
};

/// x-side: M^{-1}(D - k). xi-side: M^T(D - k). Either way the result is
/// {y : N y + k in D} with N = M or N = M^{-T}.
Domain affine_image(const Domain& domain, const AffineMap& map);

/// Matrix N of the pull-back y -> N y + k used by affine_image.
Mat pullback_matrix(const AffineMap& map);

/// Curvature proxies of a planar boundary: max |kappa| and max |d kappa / ds|,
/// the closed-curve stand-ins for ||Phi''|| and ||Phi'''|| of a local graph.
struct CurvatureBounds {
  double max_curvature = 0.0;
  double max_curvature_rate = 0.0;
};
CurvatureBounds curvature_bounds(const Domain& domain, int samples = 4096);

}  // namespace wtrace::geom
