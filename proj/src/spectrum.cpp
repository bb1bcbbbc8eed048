#include <algorithm>
#include <cmath>
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "wtrace/error.hpp"
#include "wtrace/operators.hpp"
#include "wtrace/simd.hpp"

namespace wtrace::ops {

namespace {

constexpr double kEntropyClamp = 1e-14;

[[noreturn]] void eigensolver_failure(const char* routine, lapack_int info, double norm, Eigen::Index n) {
  throw NumericError(std::string("spectrum: ") + routine + " failed with info = " + std::to_string(info) +
                     " (n = " + std::to_string(n) + ", max |entry| = " + std::to_string(norm) + ")");
}

}  // namespace

Spectrum spectrum(const Eigen::MatrixXd& symmetric, double alpha) {
  const Eigen::Index n = symmetric.rows();
  require(n == symmetric.cols(), "spectrum: matrix must be square");
  Spectrum s;
  s.alpha = alpha;
  if (n == 0) return s;
  Eigen::MatrixXd work = symmetric;
  s.eigenvalues.resize(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n), work.data(),
                                         static_cast<lapack_int>(n), s.eigenvalues.data());
  if (info != 0) eigensolver_failure("dsyevd", info, symmetric.cwiseAbs().maxCoeff(), n);
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

Spectrum spectrum(const DiscreteOperator& op) {
  require(op.hermitian, "spectrum: operator is not Hermitian; use trace_polynomial or the S variant");
  if (!op.is_complex) return spectrum(op.real, op.alpha);
  const Eigen::Index n = op.complex.rows();
  Spectrum s;
  s.alpha = op.alpha;
  if (n == 0) return s;
  Eigen::MatrixXcd work = op.complex;
  s.eigenvalues.resize(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<lapack_int>(n), work.data(),
                                         static_cast<lapack_int>(n), s.eigenvalues.data());
  if (info != 0) eigensolver_failure("zheevd", info, op.complex.cwiseAbs().maxCoeff(), n);
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

double trace_g(const Spectrum& spec, const SymbolFunction& g) {
  const auto& ev = spec.eigenvalues;
  if (g.kind() == SymbolFunction::Kind::polynomial ||
      g.kind() == SymbolFunction::Kind::analytic_series) {
    if (auto r = g.radius())
      for (double l : ev)
        if (!(std::fabs(l) < *r))
          throw PreconditionError("trace_g: eigenvalue " + std::to_string(l) + " outside the radius of convergence of " +
                                  g.name());
    return simd::polynomial_sum(g.coefficients(), ev);
  }
  double acc = 0.0;
  if (g.is_entropy()) {
    for (double l : ev) acc += g(std::clamp(l, kEntropyClamp, 1.0 - kEntropyClamp));
    return acc;
  }
  for (double l : ev) {
    if (!g.in_domain(l))
      throw PreconditionError("trace_g: eigenvalue " + std::to_string(l) + " outside the domain of " + g.name());
    acc += g(l);
  }
  return acc;
}

long count_eigs(const Spectrum& spec, double lambda1, double lambda2) {
  require(lambda1 < lambda2, "count_eigs: need lambda1 < lambda2");
  require(!(lambda1 <= 0.0 && 0.0 <= lambda2), "count_eigs: the window must exclude 0");
  return std::count_if(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                       [&](double l) { return lambda1 < l && l < lambda2; });
}

double contraction_defect(const Spectrum& spec) {
  if (spec.eigenvalues.empty()) return 0.0;
  return std::max({0.0, -spec.eigenvalues.front(), spec.eigenvalues.back() - 1.0});
}

std::complex<double> trace_polynomial(const DiscreteOperator& op, const SymbolFunction& g) {
  require(g.kind() == SymbolFunction::Kind::polynomial, "trace_polynomial: g must be a polynomial");
  const auto c = g.coefficients();
  const Eigen::MatrixXcd m = op.is_complex ? op.complex : op.real.cast<std::complex<double>>().eval();
  Eigen::MatrixXcd power = m;
  std::complex<double> acc = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    if (p > 0) power = (power * m).eval();
    if (c[p] != 0.0) acc += c[p] * power.trace();
  }
  return acc;
}

}  // namespace wtrace::ops
