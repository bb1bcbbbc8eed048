#include "wtrace/runner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wtrace/cache.hpp"
#include "wtrace/error.hpp"
#include "wtrace/io.hpp"
#include "wtrace/parallel.hpp"

namespace wtrace::run {

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::ordered_json intervals_json(const geom::IntervalUnion& u) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& iv : u.intervals) arr.push_back({iv.left, iv.right});
  return arr;
}

const char* mode_name(Mode m) { return m == Mode::T ? "T" : "S"; }

template <class Fn>
auto with_alpha(double alpha, Fn&& fn) {
  const std::string where = " (at alpha = " + io::format_double(alpha) + ")";
  try {
    return fn();
  } catch (const PreconditionError& e) {
    throw PreconditionError(e.what() + where);
  } catch (const ConfigError& e) {
    throw ConfigError(e.what() + where);
  } catch (const NumericError& e) {
    throw NumericError(e.what() + where);
  }
}

double evaluate(const Experiment1d& exp, const ops::Spectrum& s) {
  if (exp.count_window) return static_cast<double>(ops::count_eigs(s, exp.count_window->first, exp.count_window->second));
  return ops::trace_g(s, exp.g);
}

double real_value(std::complex<double> v, const char* what) {
  if (std::fabs(v.imag()) > 1e-12 * std::max(1.0, std::fabs(v.real())))
    throw PreconditionError(std::string(what) + ": symbol takes complex values; pass Re a");
  return v.real();
}

// A(chi_I; b) for an interval excluding 0, either side.
double indicator_A(double l1, double l2, double b) {
  if (l1 > 0.0) return coeff::coeff_A_indicator(l1, l2, b);
  return coeff::coeff_A_indicator(-l2, -l1, -b);
}

}  // namespace

std::vector<double> log_spaced(double lo, double hi, int n) {
  require(lo > 0.0 && hi > lo && n >= 2, "log_spaced: need 0 < lo < hi and n >= 2");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

double measure_single(const Experiment1d& exp, double alpha, long* dim) {
  const bool s_mode = exp.mode == Mode::S || exp.count_window.has_value();
  std::optional<cache::Store> store;
  std::string key;
  if (!exp.cache_dir.empty()) {
    store.emplace(exp.cache_dir);
    key = cache::nystrom_key(s_mode ? "S" : "T", alpha, exp.lambda, exp.omega, exp.a, exp.nystrom);
    if (auto s = store->load_spectrum(key)) {
      if (dim) *dim = static_cast<long>(s->eigenvalues.size());
      return evaluate(exp, *s);
    }
  }
  const ops::DiscreteOperator op = s_mode ? ops::build_S_1d(alpha, exp.lambda, exp.omega, exp.a, exp.nystrom)
                                          : ops::build_T_1d(alpha, exp.lambda, exp.omega, exp.a, exp.nystrom);
  if (dim) *dim = static_cast<long>(op.dim());
  if (!op.hermitian) {
    // tr g(T) for non-normal T only through powers of T.
    require(exp.g.kind() == SymbolFunction::Kind::polynomial,
            "sweep: T with this symbol is not Hermitian; use a polynomial g or mode S");
    return ops::trace_polynomial(op, exp.g).real();
  }
  const ops::Spectrum s = ops::spectrum(op);
  if (store) store->store_spectrum(key, s);
  return evaluate(exp, s);
}

double total_length(const geom::IntervalUnion& u) {
  double l = 0.0;
  for (const auto& i : u.intervals) l += i.length();
  return l;
}

}  // namespace

double staircase_period(const Experiment1d& exp) {
  return 2.0 * std::numbers::pi / (total_length(exp.lambda) * total_length(exp.omega));
}

double measure_1d(const Experiment1d& exp, double alpha, long* dim) {
  if (!exp.count_window || exp.phase_samples <= 1) return measure_single(exp, alpha, dim);
  // Counts step by one each time alpha |Lambda||Omega| / (2 pi) passes an
  // integer; the mean over one period removes the step phase.
  const double period = staircase_period(exp);
  require(period < alpha, "counting: alpha must exceed one staircase period");
  double acc = 0.0;
  for (int j = 0; j < exp.phase_samples; ++j)
    acc += measure_single(exp, alpha - period * j / exp.phase_samples, j == 0 ? dim : nullptr);
  return acc / exp.phase_samples;
}

SweepSeries sweep_trace(const Experiment1d& exp, const std::vector<double>& alphas) {
  require(!alphas.empty(), "sweep_trace: empty alpha list");
  for (std::size_t i = 1; i < alphas.size(); ++i)
    require(alphas[i] > alphas[i - 1], "sweep_trace: alphas must increase strictly");
  const std::size_t n = alphas.size();
  const unsigned threads = exp.threads > 0 ? static_cast<unsigned>(exp.threads) : default_threads();

  Experiment1d inner = exp;
  if (threads > 1) inner.nystrom.threads = 1;
  Experiment1d refined = inner;
  refined.nystrom.points_per_wavelength *= 2.0;
  refined.nystrom.max_dim *= 2;  // the refined run is allowed twice the cap

  // Tasks 0..n-1: the sweep; n and n+1: refined runs at both ends.
  std::vector<double> values(n + 2);
  std::vector<long> dims(n, 0);
  parallel_for(n + 2, threads, [&](std::size_t k) {
    if (k < n) {
      values[k] = with_alpha(alphas[k], [&] { return measure_1d(inner, alphas[k], &dims[k]); });
    } else {
      const double a = k == n ? alphas.front() : alphas.back();
      values[k] = with_alpha(a, [&] { return measure_1d(refined, a); });
    }
  });

  const double e_lo = std::fabs(values[n] - values[0]);
  const double e_hi = std::fabs(values[n + 1] - values[n - 1]);
  SweepSeries s;
  s.dimension = 1;
  for (std::size_t i = 0; i < n; ++i) {
    double t = n == 1 ? 0.0 : std::log(alphas[i] / alphas[0]) / std::log(alphas[n - 1] / alphas[0]);
    s.entries.push_back({alphas[i], values[i], e_lo + t * (e_hi - e_lo), dims[i]});
  }
  s.metadata["construction"] = "nystrom_1d";
  s.metadata["lambda"] = intervals_json(exp.lambda);
  s.metadata["omega"] = intervals_json(exp.omega);
  s.metadata["symbol"] = exp.a.name();
  s.metadata["mode"] = mode_name(exp.count_window ? Mode::S : exp.mode);
  if (exp.count_window) {
    s.metadata["observable"] = "count";
    s.metadata["window"] = {exp.count_window->first, exp.count_window->second};
    s.metadata["phase_samples"] = exp.phase_samples;
    s.metadata["staircase_period"] = staircase_period(exp);
  } else {
    s.metadata["observable"] = "trace";
    s.metadata["g"] = exp.g.name();
  }
  s.metadata["points_per_wavelength"] = exp.nystrom.points_per_wavelength;
  s.metadata["panel_periods"] = exp.nystrom.panel_periods;
  return s;
}

FitResult fit_two_term(const SweepSeries& series, int d) {
  require(d == 1 || d == 2, "fit_two_term: d must be 1 or 2");
  const auto& e = series.entries;
  const Eigen::Index n = static_cast<Eigen::Index>(e.size());
  require(n >= 4, "fit_two_term: at least 4 points are needed, got " + std::to_string(n));
  for (std::size_t i = 1; i < e.size(); ++i)
    require(e[i].alpha > e[i - 1].alpha, "fit_two_term: alphas must increase strictly");
  require(e.front().alpha > 0.0, "fit_two_term: alphas must be positive");
  require(e.back().alpha >= 4.0 * e.front().alpha, "fit_two_term: alpha range must span a factor >= 4");

  FitResult r;
  r.weighted = std::all_of(e.begin(), e.end(), [](const SweepEntry& s) { return s.estimate > 0.0; });
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = e[static_cast<std::size_t>(i)].alpha;
    const double lead = std::pow(a, d), sub = std::pow(a, d - 1);
    x.row(i) << lead, sub * std::log(a), sub;
    y(i) = e[static_cast<std::size_t>(i)].value;
    w(i) = r.weighted ? 1.0 / e[static_cast<std::size_t>(i)].estimate : 1.0;
  }
  const Eigen::MatrixXd xw = w.asDiagonal() * x;
  const Eigen::VectorXd yw = w.asDiagonal() * y;
  const Eigen::Vector3d norms = xw.colwise().norm();
  const Eigen::MatrixXd xn = xw * norms.cwiseInverse().asDiagonal();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xn);
  const auto sv = svd.singularValues();
  r.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(r.condition <= 1e8))
    throw NumericError("fit_two_term: ill-posed fit, condition " + io::format_double(r.condition) +
                       " > 1e8 (alpha range too narrow)");

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(xn);
  const Eigen::Vector3d cn = qr.solve(yw);
  const Eigen::Vector3d c = cn.cwiseQuotient(norms);
  r.c_d = c(0);
  r.c_log = c(1);
  r.c_sub = c(2);

  const Eigen::VectorXd resid = y - x * c;
  r.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  // Variance scale: the weighted chi^2 per degree of freedom, floored by the
  // discretization noise itself.
  const double dof = static_cast<double>(n - 3);
  const double chi2 = (w.asDiagonal() * resid).squaredNorm() / dof;
  double floor = 1.0;
  if (!r.weighted) {
    floor = 0.0;
    for (const auto& s : e) floor += s.estimate * s.estimate;
    floor /= static_cast<double>(n);
  }
  const double scale = std::max(chi2, floor);
  const Eigen::Matrix3d cov_n = (xn.transpose() * xn).inverse();
  r.stderr_d = std::sqrt(scale * cov_n(0, 0)) / norms(0);
  r.stderr_log = std::sqrt(scale * cov_n(1, 1)) / norms(1);
  r.stderr_sub = std::sqrt(scale * cov_n(2, 2)) / norms(2);
  return r;
}

Prediction predict_coefficients(const ScalarSymbol& a, const SymbolFunction& g, const geom::Domain& lambda,
                                const geom::Domain& omega, const coeff::QuadratureSpec& quad) {
  require(lambda.bounded() && omega.bounded(), "predict_coefficients: domains must be bounded");
  ScalarSymbol b0 = ScalarSymbol::constant(0.0), b1 = ScalarSymbol::constant(0.0);
  if (a.is_constant()) {
    const double c = real_value(a.constant_value(), "predict_coefficients");
    b0 = ScalarSymbol::constant(g(c));
    b1 = ScalarSymbol::constant(coeff::coeff_A(g, c));
  } else {
    b0 = ScalarSymbol::general(
        "g(" + a.name() + ")",
        [a, g](std::span<const double> x, std::span<const double> xi) {
          return std::complex<double>(g(real_value(a(x, xi), "predict_coefficients")), 0.0);
        },
        a.support());
    b1 = ScalarSymbol::general(
        "A(g;" + a.name() + ")",
        [a, g](std::span<const double> x, std::span<const double> xi) {
          return std::complex<double>(coeff::coeff_A(g, real_value(a(x, xi), "predict_coefficients")), 0.0);
        },
        a.support());
  }
  Prediction p;
  const auto w0 = coeff::coeff_W0(b0, lambda, omega, quad);
  const auto w1 = coeff::coeff_W1(b1, lambda, omega, quad);
  p.w0_term = w0.value.real();
  p.w0_error = w0.error;
  p.w1_term = w1.value.real();
  p.w1_error = w1.error;
  return p;
}

ComparisonReport compare(SweepSeries series, int d, const Prediction& p) {
  ComparisonReport r;
  r.fit = fit_two_term(series, d);
  r.series = std::move(series);
  r.prediction = p;
  r.absolute_error_leading = std::fabs(r.fit.c_d - p.w0_term);
  if (p.w0_term != 0.0) r.relative_error_leading = r.absolute_error_leading / std::fabs(p.w0_term);
  if (p.w1_term != 0.0) r.relative_error_log = std::fabs(r.fit.c_log - p.w1_term) / std::fabs(p.w1_term);
  return r;
}

ComparisonReport trace_experiment(const Experiment1d& exp, const std::vector<double>& alphas) {
  require(!exp.count_window, "trace_experiment: use counting_experiment for counts");
  const ScalarSymbol a = exp.mode == Mode::S ? exp.a.real_part() : exp.a;
  const Prediction p = predict_coefficients(a, exp.g, geom::Domain::intervals(exp.lambda.intervals),
                                            geom::Domain::intervals(exp.omega.intervals));
  return compare(sweep_trace(exp, alphas), 1, p);
}

ComparisonReport counting_experiment(const std::vector<double>& alphas, double lambda1, double lambda2,
                                     Experiment1d exp) {
  require(lambda1 < lambda2, "counting_experiment: need lambda1 < lambda2");
  require(lambda1 > 0.0 || lambda2 < 0.0, "counting_experiment: the window (lambda1, lambda2) must exclude 0");
  exp.count_window = std::make_pair(lambda1, lambda2);
  exp.mode = Mode::S;
  const ScalarSymbol a = exp.a.real_part();
  auto b0 = ScalarSymbol::general(
      "chi_I(" + a.name() + ")",
      [a, lambda1, lambda2](std::span<const double> x, std::span<const double> xi) {
        const double v = a(x, xi).real();
        return std::complex<double>(lambda1 < v && v < lambda2 ? 1.0 : 0.0, 0.0);
      },
      a.support());
  auto b1 = ScalarSymbol::general(
      "A(chi_I;" + a.name() + ")",
      [a, lambda1, lambda2](std::span<const double> x, std::span<const double> xi) {
        return std::complex<double>(indicator_A(lambda1, lambda2, a(x, xi).real()), 0.0);
      },
      a.support());
  if (a.is_constant()) {
    const double c = a.constant_value().real();
    b0 = ScalarSymbol::constant(lambda1 < c && c < lambda2 ? 1.0 : 0.0);
    b1 = ScalarSymbol::constant(indicator_A(lambda1, lambda2, c));
  }
  const auto lam = geom::Domain::intervals(exp.lambda.intervals);
  const auto om = geom::Domain::intervals(exp.omega.intervals);
  Prediction p;
  const auto w0 = coeff::coeff_W0(b0, lam, om);
  const auto w1 = coeff::coeff_W1(b1, lam, om);
  p.w0_term = w0.value.real();
  p.w0_error = w0.error;
  p.w1_term = w1.value.real();
  p.w1_error = w1.error;
  return compare(sweep_trace(exp, alphas), 1, p);
}

ComparisonReport entropy_experiment(const std::vector<int>& L_list, double k_F, const geom::Domain& region,
                                    const EntropyOptions& opt) {
  require(k_F > 0.0, "entropy_experiment: k_F must be positive");
  require(region.dimension() == 2 && region.bounded(), "entropy_experiment: region must be a bounded 2-D domain");
  require(!L_list.empty(), "entropy_experiment: empty L list");
  for (std::size_t i = 1; i < L_list.size(); ++i)
    require(L_list[i] > L_list[i - 1], "entropy_experiment: L values must increase strictly");
  const geom::Domain unit_sea = opt.fermi_shape.value_or(geom::Domain::disk(1.0));
  geom::AffineMap scale{Eigen::MatrixXd::Identity(2, 2) / k_F, Eigen::VectorXd::Zero(2), geom::AffineMap::Side::x_side};
  const geom::Domain sea = geom::affine_image(unit_sea, scale);
  const SymbolFunction h = SymbolFunction::entropy();

  const unsigned threads = opt.threads > 0 ? static_cast<unsigned>(opt.threads) : default_threads();
  const std::size_t n = L_list.size();
  std::vector<SweepEntry> entries(n);
  parallel_for(n, threads, [&](std::size_t k) {
    const double alpha = L_list[k] * k_F;
    entries[k] = with_alpha(alpha, [&] {
      const Eigen::MatrixXi sites = ops::lattice_sites(region, L_list[k]);
      if (sites.rows() < 100)
        throw PreconditionError("entropy_experiment: only " + std::to_string(sites.rows()) +
                                " lattice sites for L = " + std::to_string(L_list[k]) + " (need >= 100)");
      ops::DiscreteOperator op = ops::build_fermion_correlation_2d(sites, sea, opt.max_dim, threads > 1 ? 1 : 0);
      op.alpha = alpha;
      const ops::Spectrum s = ops::spectrum(op);
      return SweepEntry{alpha, ops::trace_g(s, h), 0.0, static_cast<long>(sites.rows())};
    });
  });

  SweepSeries series;
  series.dimension = 2;
  series.entries = std::move(entries);
  series.metadata["construction"] = "lattice_fermion_2d";
  series.metadata["region"] = region.label();
  series.metadata["fermi_sea"] = sea.label();
  series.metadata["k_F"] = k_F;
  series.metadata["g"] = h.name();
  series.metadata["alpha_convention"] = "alpha = L * k_F (region linear scale times Fermi radius)";
  series.metadata["status"] = "exploratory: h is not smooth at 0 and 1, no theorem-backed tolerance";

  Prediction p;
  const double ah = coeff::coeff_A(h, 1.0);
  const auto w1 = coeff::coeff_W1(ScalarSymbol::constant(ah), region, unit_sea, opt.quad);
  p.w1_term = w1.value.real();
  p.w1_error = w1.error;
  p.w0_term = 0.0;  // h(1) = 0
  // Same W1 for the disk of equal area, to contrast shapes.
  const double area = geom::measure(region);
  const auto disk_w1 = coeff::coeff_W1(ScalarSymbol::constant(ah), geom::Domain::disk(std::sqrt(area / kPi)),
                                       unit_sea, opt.quad);
  series.metadata["equal_area_disk_w1_term"] = disk_w1.value.real();

  ComparisonReport r = compare(std::move(series), 2, p);
  r.exploratory = true;
  return r;
}

}  // namespace wtrace::run
