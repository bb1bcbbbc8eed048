#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "wtrace/domain.hpp"
#include "wtrace/symbol.hpp"

namespace wtrace::ops {

enum class Construction { nystrom_1d, lattice_fermion_2d };

/// Finite realization of an operator. Exactly one of `real` / `complex` is
/// populated; `hermitian` is false only for T with a non-real or x-dependent
/// symbol.
struct DiscreteOperator {
  Construction construction = Construction::nystrom_1d;
  double alpha = 0.0;
  bool is_complex = false;
  bool hermitian = true;
  Eigen::MatrixXd real;
  Eigen::MatrixXcd complex;
  Eigen::VectorXd nodes;    ///< d = 1 collocation points
  Eigen::VectorXd weights;  ///< d = 1 quadrature weights
  Eigen::MatrixXi sites;    ///< d = 2 lattice sites, one per row

  Eigen::Index dim() const { return is_complex ? complex.rows() : real.rows(); }
  /// max |M - M^*|
  double hermiticity_defect() const;
  std::complex<double> trace() const;
};

struct NystromOptions {
  double points_per_wavelength = 8.0;
  double panel_periods = 2.0;
  std::size_t max_dim = 12000;
  int threads = 0;  ///< 0 = default_threads()
};

/// Collocation points and weights on Lambda for the given scale.
struct NystromGrid {
  Eigen::VectorXd nodes, weights;
};
NystromGrid nystrom_grid(double alpha, const geom::IntervalUnion& lambda, double rho,
                         const NystromOptions& opt);

/// T = chi_Lambda P Op(a) P chi_Lambda on L^2(Lambda), Lambda, Omega subsets of R.
DiscreteOperator build_T_1d(double alpha, const geom::IntervalUnion& lambda,
                            const geom::IntervalUnion& omega, const ScalarSymbol& a,
                            const NystromOptions& opt = {});
/// S = chi_Lambda P Re Op(a) P chi_Lambda, always Hermitian.
DiscreteOperator build_S_1d(double alpha, const geom::IntervalUnion& lambda,
                            const geom::IntervalUnion& omega, const ScalarSymbol& a,
                            const NystromOptions& opt = {});
/// chi_Lambda Op(a chi_Omega) chi_Lambda, without the left projection.
DiscreteOperator build_T_tilde_1d(double alpha, const geom::IntervalUnion& lambda,
                                  const geom::IntervalUnion& omega, const ScalarSymbol& a,
                                  const NystromOptions& opt = {});

/// Integer points j with j / L in the region.
Eigen::MatrixXi lattice_sites(const geom::Domain& region, double L);

/// C_jk = (2 pi)^-2 int_Omega e^{i xi . (j - k)} d xi on the given sites.
DiscreteOperator build_fermion_correlation_2d(const Eigen::MatrixXi& sites,
                                              const geom::Domain& fermi_sea,
                                              std::size_t max_dim = 12000, int threads = 0);
/// Single correlation entry for a displacement; closed form for centred disks.
std::complex<double> fermion_correlation(const geom::Domain& fermi_sea, int dx, int dy);

struct Spectrum {
  std::vector<double> eigenvalues;  ///< ascending
  double alpha = 0.0;
};

/// Full Hermitian eigendecomposition (eigenvalues only).
Spectrum spectrum(const DiscreteOperator& op);
Spectrum spectrum(const Eigen::MatrixXd& symmetric, double alpha = 0.0);

/// sum_i g(lambda_i); the entropy clamps to [1e-14, 1 - 1e-14].
double trace_g(const Spectrum& spec, const SymbolFunction& g);
/// #{i : lambda1 < lambda_i < lambda2}
long count_eigs(const Spectrum& spec, double lambda1, double lambda2);
/// max(0, -lambda_min, lambda_max - 1)
double contraction_defect(const Spectrum& spec);
/// tr g(T) = sum_m w_m tr T^m for polynomial g; works for non-Hermitian T.
std::complex<double> trace_polynomial(const DiscreteOperator& op, const SymbolFunction& g);

enum class Sign { plus, minus };

/// K_±(x, y) = (2 pi)^-1 (x y)^{-1/2} int (y/x)^{±is} g(1/(1+e^{2 pi s})) ds over
/// |s| <= s_max. Complex unless g(t) = g(1-t).
std::complex<double> model_kernel_K(const SymbolFunction& g, Sign sign, double x, double y,
                                    double s_max = 6.0, double tol = 1e-12);
/// 1 / (1 + e^{±2 pi z})
double mellin_multiplier(double z, Sign sign);

}  // namespace wtrace::ops
