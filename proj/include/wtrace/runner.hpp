#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wtrace/coefficients.hpp"
#include "wtrace/domain.hpp"
#include "wtrace/operators.hpp"
#include "wtrace/symbol.hpp"

namespace wtrace::run {

enum class Mode { T, S };

/// One-dimensional experiment: tr g(T_alpha(a; Lambda, Omega)), or an
/// eigenvalue count when `count_window` is set.
struct Experiment1d {
  geom::IntervalUnion lambda{{{0.0, 1.0}}};
  geom::IntervalUnion omega{{{-1.0, 1.0}}};
  ScalarSymbol a = ScalarSymbol::constant(1.0);
  SymbolFunction g = SymbolFunction::polynomial({1.0, -1.0});
  Mode mode = Mode::T;
  std::optional<std::pair<double, double>> count_window;
  /// Counting only: each value is the mean count over this many alphas
  /// spread across one staircase period below alpha.
  int phase_samples = 1;
  ops::NystromOptions nystrom;
  std::string cache_dir;  ///< empty = no cache
  int threads = 0;
};

struct SweepEntry {
  double alpha = 0.0;
  double value = 0.0;
  double estimate = 0.0;  ///< discretization estimate
  long dim = 0;
};

struct SweepSeries {
  std::vector<SweepEntry> entries;
  nlohmann::ordered_json metadata;
  int dimension = 1;
};

/// 2 pi / (|Lambda| |Omega|): the alpha step that adds one eigenvalue near 1.
double staircase_period(const Experiment1d& exp);

/// Measured value at a single alpha (no estimate).
double measure_1d(const Experiment1d& exp, double alpha, long* dim = nullptr);

/// One value per alpha in the given order (must increase strictly). The
/// estimate is |value(2N) - value(N)| at the smallest and largest alpha,
/// interpolated linearly in log alpha.
SweepSeries sweep_trace(const Experiment1d& exp, const std::vector<double>& alphas);

struct FitResult {
  double c_d = 0.0, c_log = 0.0, c_sub = 0.0;
  double residual_rms = 0.0;
  double condition = 0.0;
  double stderr_d = 0.0, stderr_log = 0.0, stderr_sub = 0.0;
  bool weighted = false;
};

/// Least squares on {alpha^d, alpha^{d-1} log alpha, alpha^{d-1}}.
FitResult fit_two_term(const SweepSeries& series, int d);

struct Prediction {
  double w0_term = 0.0;
  double w1_term = 0.0;
  double w0_error = 0.0;
  double w1_error = 0.0;
};

/// w0 = W0(g o a; Lambda, Omega), w1 = W1(A(g; a); dLambda, dOmega). S-mode
/// callers pass Re a.
Prediction predict_coefficients(const ScalarSymbol& a, const SymbolFunction& g, const geom::Domain& lambda,
                                const geom::Domain& omega, const coeff::QuadratureSpec& quad = {});

struct ComparisonReport {
  SweepSeries series;
  FitResult fit;
  Prediction prediction;
  std::optional<double> relative_error_leading;  ///< absent when w0_term = 0
  double absolute_error_leading = 0.0;
  std::optional<double> relative_error_log;
  bool exploratory = false;
};

ComparisonReport compare(SweepSeries series, int d, const Prediction& p);

/// Sweep of tr g over the alphas, fitted and compared with the prediction.
ComparisonReport trace_experiment(const Experiment1d& exp, const std::vector<double>& alphas);

/// n(lambda1, lambda2; alpha) = #{eigenvalues of S in (lambda1, lambda2)}.
ComparisonReport counting_experiment(const std::vector<double>& alphas, double lambda1, double lambda2,
                                     Experiment1d exp);

struct EntropyOptions {
  std::size_t max_dim = 12000;
  int threads = 0;
  /// Fermi sea in units of k_F; the unit disk when empty.
  std::optional<geom::Domain> fermi_shape;
  coeff::QuadratureSpec quad;
};

/// Free-fermion entanglement entropy on sites j with j / L in the region,
/// against the effective scale alpha = L k_F.
ComparisonReport entropy_experiment(const std::vector<int>& L_list, double k_F, const geom::Domain& region,
                                    const EntropyOptions& opt = {});

/// Log-spaced grid of n points on [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int n);

}  // namespace wtrace::run
