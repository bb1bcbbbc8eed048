#include <algorithm>
#include <cmath>
#include <numbers>

#include "wtrace/error.hpp"
#include "wtrace/operators.hpp"
#include "wtrace/parallel.hpp"
#include "wtrace/quadrature.hpp"
#include "wtrace/simd.hpp"

namespace wtrace::ops {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

std::vector<geom::Interval> checked_intervals(const geom::IntervalUnion& u, const char* what) {
  std::vector<geom::Interval> iv = u.intervals;
  require(!iv.empty(), std::string(what) + ": empty interval union");
  std::sort(iv.begin(), iv.end(), [](auto& a, auto& b) { return a.left < b.left; });
  for (std::size_t k = 0; k < iv.size(); ++k) {
    require(iv[k].right > iv[k].left, std::string(what) + ": interval with right <= left");
    if (k > 0 && iv[k].left < iv[k - 1].right)
      throw PreconditionError(std::string(what) + ": intervals overlap");
  }
  return iv;
}

double max_abs(const std::vector<geom::Interval>& iv) {
  double r = 0.0;
  for (const auto& i : iv) r = std::max({r, std::fabs(i.left), std::fabs(i.right)});
  return r;
}

double sinc(double v) { return v == 0.0 ? 1.0 : std::sin(v) / v; }

// (alpha / 2 pi) int_Omega e^{i alpha xi (x - y)} d xi, written as a product of
// a sinc and a phase so neither the diagonal nor small |x - y| cancels.
cd projection_entry(double alpha, const std::vector<geom::Interval>& omega, double z) {
  cd acc = 0.0;
  for (const auto& iv : omega) {
    const double len = iv.right - iv.left;
    const double mid = 0.5 * (iv.right + iv.left);
    const double amp = alpha * len / (2.0 * kPi) * sinc(0.5 * alpha * len * z);
    acc += amp * std::polar(1.0, alpha * mid * z);
  }
  return acc;
}

Eigen::MatrixXcd projection_block(double alpha, const std::vector<geom::Interval>& omega,
                                  const Eigen::VectorXd& rows, const Eigen::VectorXd& cols,
                                  unsigned threads) {
  Eigen::MatrixXcd m(rows.size(), cols.size());
  parallel_for(static_cast<std::size_t>(cols.size()), threads, [&](std::size_t j) {
    for (Eigen::Index i = 0; i < rows.size(); ++i)
      m(i, j) = projection_entry(alpha, omega, rows(i) - cols(j));
  });
  return m;
}

// (alpha / 2 pi) int_Omega a(x_i, xi) e^{i alpha xi (x_i - y_j)} d xi by a
// composite Gauss rule in xi, assembled as one matrix product.
Eigen::MatrixXcd symbol_block(double alpha, const std::vector<geom::Interval>& omega,
                              const ScalarSymbol& a, const Eigen::VectorXd& rows,
                              const Eigen::VectorXd& cols, const NystromOptions& opt,
                              unsigned threads) {
  const double lo = std::min(rows.minCoeff(), cols.minCoeff());
  const double hi = std::max(rows.maxCoeff(), cols.maxCoeff());
  const int order = 16;
  std::vector<double> xi, w;
  for (const auto& iv : omega) {
    const double periods = alpha * (hi - lo) * (iv.right - iv.left) / (2.0 * kPi);
    const int panels = std::max(1, static_cast<int>(std::ceil(periods * opt.points_per_wavelength / order)) + 1);
    auto rule = quad::composite_gauss_legendre(iv.left, iv.right, panels, order);
    xi.insert(xi.end(), rule.nodes.begin(), rule.nodes.end());
    w.insert(w.end(), rule.weights.begin(), rule.weights.end());
  }
  const Eigen::Index q = static_cast<Eigen::Index>(xi.size());
  Eigen::MatrixXcd left(rows.size(), q), right(q, cols.size());
  const bool x_dep = a.depends_on_x();
  parallel_for(static_cast<std::size_t>(q), threads, [&](std::size_t k) {
    const Eigen::Index kk = static_cast<Eigen::Index>(k);
    const double s = xi[k];
    const cd ax = x_dep ? cd(0.0) : a.at(0.0, s);
    for (Eigen::Index i = 0; i < rows.size(); ++i) {
      const cd v = x_dep ? a.at(rows(i), s) : ax;
      left(i, kk) = v * (w[k] * alpha / (2.0 * kPi)) * std::polar(1.0, alpha * s * rows(i));
    }
    for (Eigen::Index j = 0; j < cols.size(); ++j) right(kk, j) = std::polar(1.0, -alpha * s * cols(j));
  });
  return left * right;
}

Eigen::VectorXd sqrt_weights(const NystromGrid& g) { return g.weights.cwiseSqrt(); }

DiscreteOperator finish(double alpha, const NystromGrid& grid, Eigen::MatrixXcd k, bool hermitian) {
  const Eigen::VectorXd s = sqrt_weights(grid);
  DiscreteOperator op;
  op.construction = Construction::nystrom_1d;
  op.alpha = alpha;
  op.hermitian = hermitian;
  op.nodes = grid.nodes;
  op.weights = grid.weights;
  const double scale = k.cwiseAbs().maxCoeff();
  if (k.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    op.real = k.real();
    simd::scale_symmetric(op.real.data(), static_cast<std::size_t>(op.real.rows()),
                          std::span<const double>(s.data(), static_cast<std::size_t>(s.size())));
    if (hermitian) op.real = (0.5 * (op.real + op.real.transpose())).eval();
    op.is_complex = false;
  } else {
    k = s.asDiagonal() * k * s.asDiagonal();
    if (hermitian) k = (0.5 * (k + k.adjoint())).eval();
    op.complex = std::move(k);
    op.is_complex = true;
  }
  return op;
}

enum class Variant { T, S, T_tilde };

DiscreteOperator build(Variant variant, double alpha, const geom::IntervalUnion& lambda_u,
                       const geom::IntervalUnion& omega_u, const ScalarSymbol& a_in,
                       const NystromOptions& opt) {
  require(alpha > 0.0, "nystrom: alpha must be positive");
  const auto lambda = checked_intervals(lambda_u, "nystrom: Lambda");
  const auto omega = checked_intervals(omega_u, "nystrom: Omega");
  const unsigned threads = opt.threads > 0 ? static_cast<unsigned>(opt.threads) : default_threads();
  const double rho = max_abs(omega);
  require(rho > 0.0, "nystrom: Omega must not be {0}");
  NystromGrid grid = nystrom_grid(alpha, lambda_u, rho, opt);

  // Re Op(a) = Op(Re a) for multipliers; for x-dependent symbols S is the
  // Hermitian part of T.
  const bool full = a_in.depends_on_x();
  const ScalarSymbol a = (variant == Variant::S && !full) ? a_in.real_part() : a_in;

  if (a.is_constant()) {
    const cd c = a.constant_value();
    Eigen::MatrixXcd k = c * projection_block(alpha, omega, grid.nodes, grid.nodes, threads);
    return finish(alpha, grid, std::move(k), c.imag() == 0.0);
  }
  if (!full) {
    bool real_valued = true;
    for (const auto& iv : omega)
      for (int k = 0; k <= 64 && real_valued; ++k)
        real_valued = a.at(0.0, iv.left + (iv.right - iv.left) * k / 64.0).imag() == 0.0;
    Eigen::MatrixXcd k = symbol_block(alpha, omega, a, grid.nodes, grid.nodes, opt, threads);
    return finish(alpha, grid, std::move(k), real_valued);
  }

  if (variant == Variant::T_tilde) {
    Eigen::MatrixXcd k = symbol_block(alpha, omega, a, grid.nodes, grid.nodes, opt, threads);
    return finish(alpha, grid, std::move(k), false);
  }
  // T = (chi_Lambda P chi_Z)(Op(a chi_Omega) chi_Lambda), Z the x-support of a.
  const auto& sup = a.support();
  require(!sup.everywhere && sup.x_center.size() == 1 && sup.x_radius > 0.0,
          "nystrom: x-dependent symbols need a bounded x-support");
  geom::IntervalUnion zset{{{sup.x_center[0] - sup.x_radius, sup.x_center[0] + sup.x_radius}}};
  NystromOptions zopt = opt;
  zopt.max_dim = 4 * opt.max_dim;
  const NystromGrid zg = nystrom_grid(alpha, zset, rho, zopt);
  Eigen::MatrixXcd p = projection_block(alpha, omega, grid.nodes, zg.nodes, threads);
  Eigen::MatrixXcd m = symbol_block(alpha, omega, a, zg.nodes, grid.nodes, opt, threads);
  Eigen::MatrixXcd k = p * zg.weights.asDiagonal() * m;
  DiscreteOperator op = finish(alpha, grid, std::move(k), false);
  if (variant == Variant::S) {
    if (op.is_complex) {
      op.complex = (0.5 * (op.complex + op.complex.adjoint())).eval();
    } else {
      op.real = (0.5 * (op.real + op.real.transpose())).eval();
    }
    op.hermitian = true;
  }
  return op;
}

}  // namespace

NystromGrid nystrom_grid(double alpha, const geom::IntervalUnion& lambda, double rho,
                         const NystromOptions& opt) {
  require(opt.points_per_wavelength >= 6.0, "nystrom: points_per_wavelength must be >= 6");
  require(opt.panel_periods > 0.0, "nystrom: panel_periods must be positive");
  const double panel = 2.0 * kPi / (alpha * rho) * opt.panel_periods;
  const int order = std::max(4, static_cast<int>(std::lround(opt.points_per_wavelength * opt.panel_periods)));
  std::size_t total = 0;
  std::vector<int> panels;
  for (const auto& iv : lambda.intervals) {
    panels.push_back(std::max(1, static_cast<int>(std::ceil((iv.right - iv.left) / panel))));
    total += static_cast<std::size_t>(panels.back()) * order;
  }
  if (total < 32)
    throw PreconditionError("nystrom: N = " + std::to_string(total) + " < 32, alpha too small");
  if (total > opt.max_dim)
    throw PreconditionError("nystrom: N = " + std::to_string(total) + " exceeds the memory cap " +
                            std::to_string(opt.max_dim));
  NystromGrid g;
  g.nodes.resize(static_cast<Eigen::Index>(total));
  g.weights.resize(static_cast<Eigen::Index>(total));
  Eigen::Index pos = 0;
  for (std::size_t k = 0; k < lambda.intervals.size(); ++k) {
    const auto& iv = lambda.intervals[k];
    auto rule = quad::composite_gauss_legendre(iv.left, iv.right, panels[k], order);
    for (std::size_t i = 0; i < rule.size(); ++i, ++pos) {
      g.nodes(pos) = rule.nodes[i];
      g.weights(pos) = rule.weights[i];
    }
  }
  return g;
}

DiscreteOperator build_T_1d(double alpha, const geom::IntervalUnion& lambda,
                            const geom::IntervalUnion& omega, const ScalarSymbol& a,
                            const NystromOptions& opt) {
  return build(Variant::T, alpha, lambda, omega, a, opt);
}

DiscreteOperator build_S_1d(double alpha, const geom::IntervalUnion& lambda,
                            const geom::IntervalUnion& omega, const ScalarSymbol& a,
                            const NystromOptions& opt) {
  return build(Variant::S, alpha, lambda, omega, a, opt);
}

DiscreteOperator build_T_tilde_1d(double alpha, const geom::IntervalUnion& lambda,
                                  const geom::IntervalUnion& omega, const ScalarSymbol& a,
                                  const NystromOptions& opt) {
  return build(Variant::T_tilde, alpha, lambda, omega, a, opt);
}

double DiscreteOperator::hermiticity_defect() const {
  if (is_complex) return (complex - complex.adjoint()).cwiseAbs().maxCoeff();
  return (real - real.transpose()).cwiseAbs().maxCoeff();
}

std::complex<double> DiscreteOperator::trace() const {
  return is_complex ? complex.trace() : std::complex<double>(real.trace(), 0.0);
}

}  // namespace wtrace::ops
