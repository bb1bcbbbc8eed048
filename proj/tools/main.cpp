// wtrace: config-driven front end for the trace-asymptotics toolkit.
//
//   wtrace <command> <config.json> [--alpha-max A] [--out DIR] [--threads N]
//                                  [--dump-normalized]
//
// Exit status: 0 success, 2 invalid input, 3 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "wtrace/cache.hpp"
#include "wtrace/coefficients.hpp"
#include "wtrace/config.hpp"
#include "wtrace/error.hpp"
#include "wtrace/io.hpp"
#include "wtrace/operators.hpp"
#include "wtrace/report.hpp"
#include "wtrace/runner.hpp"
#include "wtrace/verify.hpp"

namespace {

using namespace wtrace;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Overrides {
  std::optional<double> alpha_max;
  std::optional<std::string> out;
  std::optional<int> threads;
};

void apply(config::Config& c, const Overrides& o) {
  if (o.out) c.out_dir = *o.out;
  if (o.threads) {
    if (*o.threads < 0) throw ConfigError("--threads: must be nonnegative");
    c.threads = *o.threads;
  }
  if (o.alpha_max) {
    const double amax = *o.alpha_max;
    if (!(amax > 0.0)) throw ConfigError("--alpha-max: must be positive");
    auto& n = c.numerics;
    if (!n.alphas.empty()) {
      std::erase_if(n.alphas, [amax](double a) { return a > amax; });
      if (n.alphas.empty()) throw ConfigError("--alpha-max: removes every alpha in numerics.alphas");
    } else {
      if (amax <= n.alpha_min) throw ConfigError("--alpha-max: must exceed numerics.alpha_min");
      n.alpha_max = amax;
    }
    auto L = config::entropy_L(c);
    std::erase_if(L, [&](int l) { return l * c.k_F > amax; });
    if (c.mode == config::Mode::entropy && L.size() < 3)
      throw ConfigError("--alpha-max: fewer than 3 lattice sizes remain");
    c.L_list = L;
  }
}

coeff::QuadratureSpec quadrature(const config::Config& c) {
  coeff::QuadratureSpec q;
  q.outer_nodes = c.numerics.outer_nodes;
  q.inner_nodes = c.numerics.inner_nodes;
  q.boundary_nodes = c.numerics.boundary_nodes;
  return q;
}

ojson complex_json(std::complex<double> z) { return ojson::array({z.real(), z.imag()}); }

fs::path stem_path(const config::Config& c) { return fs::path(c.out_dir) / c.stem; }

void write_json(const fs::path& path, const ojson& j) { io::atomic_write(path, j.dump(2) + "\n"); }

int run_coeffs(const config::Config& c) {
  const geom::Domain lambda = config::build_domain(c.lambda);
  const geom::Domain omega = config::build_domain(c.omega);
  const ScalarSymbol a = config::build_symbol(c.symbol);
  const SymbolFunction g = config::build_g(c.g);
  const auto quad = quadrature(c);

  const auto p = run::predict_coefficients(a, g, lambda, omega, quad);
  const auto w0 = coeff::coeff_W0(a, lambda, omega, quad);
  const auto w1 = coeff::coeff_W1(a, lambda, omega, quad);
  ojson j;
  j["experiment"] = {{"mode", "coeffs"},
                     {"lambda", lambda.label()},
                     {"omega", omega.label()},
                     {"symbol", a.name()},
                     {"g", g.name()},
                     {"dimension", lambda.dimension()},
                     {"timestamp", report::utc_timestamp()}};
  ojson A = {{"A_g_1", coeff::coeff_A(g, 1.0, c.numerics.tolerance)}};
  if (std::fabs(g(1.0)) <= 1e-12) A["A_g_1_mellin"] = coeff::coeff_A_mellin(g, c.numerics.tolerance);
  j["A"] = A;
  j["W0_a"] = {{"value", complex_json(w0.value)}, {"error", w0.error}};
  j["W1_a"] = {{"value", complex_json(w1.value)}, {"error", w1.error}};
  j["prediction"] = {{"w0_term", p.w0_term},
                     {"w1_term", p.w1_term},
                     {"w0_error", p.w0_error},
                     {"w1_error", p.w1_error}};
  fs::create_directories(c.out_dir);
  write_json(stem_path(c).string() + ".json", j);
  std::cout << "coeffs " << lambda.label() << " x " << omega.label() << " g=" << g.name()
            << ": w0_term=" << io::format_double(p.w0_term) << " w1_term=" << io::format_double(p.w1_term)
            << " (+-" << io::format_double(p.w1_error) << ")\n";
  return 0;
}

int run_spectrum(const config::Config& c) {
  const auto e = config::experiment_1d(c);
  const auto alphas = config::alpha_grid(c.numerics);
  fs::create_directories(c.out_dir);
  ojson runs = ojson::array();
  for (double alpha : alphas) {
    const bool s_mode = e.mode == run::Mode::S;
    const auto op = s_mode ? ops::build_S_1d(alpha, e.lambda, e.omega, e.a, e.nystrom)
                           : ops::build_T_1d(alpha, e.lambda, e.omega, e.a, e.nystrom);
    if (!op.hermitian)
      throw PreconditionError("spectrum: T is not Hermitian for symbol '" + e.a.name() + "'; use operator S");
    std::optional<ops::Spectrum> spec;
    std::optional<cache::Store> store;
    std::string key;
    if (!e.cache_dir.empty()) {
      store.emplace(e.cache_dir);
      key = cache::nystrom_key(s_mode ? "S" : "T", alpha, e.lambda, e.omega, e.a, e.nystrom);
      spec = store->load_spectrum(key);
    }
    if (!spec) {
      spec = ops::spectrum(op);
      if (store) store->store_spectrum(key, *spec);
    }
    std::ostringstream name;
    name << c.stem << "_alpha" << io::format_double(alpha) << ".csv";
    cache::write_spectrum_csv(fs::path(c.out_dir) / name.str(), *spec);
    const double tr = ops::trace_g(*spec, e.g);
    ojson r = {{"alpha", alpha},
               {"dim", op.dim()},
               {"trace", op.trace().real()},
               {"trace_g", tr},
               {"contraction_defect", ops::contraction_defect(*spec)},
               {"hermiticity_defect", op.hermiticity_defect()},
               {"eigenvalues_csv", name.str()}};
    if (c.lambda1 > 0.0 || c.lambda2 < 0.0) r["count"] = ops::count_eigs(*spec, c.lambda1, c.lambda2);
    runs.push_back(r);
    std::cout << "spectrum alpha=" << io::format_double(alpha) << " N=" << op.dim()
              << " tr g=" << io::format_double(tr) << "\n";
  }
  ojson j;
  j["experiment"] = {{"mode", "spectrum"}, {"operator", c.operator_mode}, {"symbol", e.a.name()},
                     {"g", e.g.name()}, {"timestamp", report::utc_timestamp()}};
  j["runs"] = runs;
  write_json(stem_path(c).string() + ".json", j);
  return 0;
}

int finish_report(const config::Config& c, const run::ComparisonReport& r, const std::string& name) {
  fs::create_directories(c.out_dir);
  report::write_all(r, stem_path(c));
  std::cout << report::summary_line(name, r) << "\n";
  return 0;
}

int run_verify(const config::Config& c) {
  verify::SuiteOptions opt;
  opt.seed = c.numerics.seed;
  opt.threads = c.threads;
  opt.on_result = [](const verify::CheckResult& r) {
    std::cout << (r.passed ? "  ok    " : "  FAIL  ") << r.module << ": " << r.name << " [" << r.detail << "] ("
              << std::fixed << std::setprecision(2) << r.seconds << std::defaultfloat << " s)\n"
              << std::flush;
  };
  const auto results = verify::run_invariant_suite(opt);
  ojson checks = ojson::array();
  int failed = 0;
  double total = 0.0;
  for (const auto& r : results) {
    failed += r.passed ? 0 : 1;
    total += r.seconds;
    checks.push_back({{"module", r.module}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  ojson j;
  j["experiment"] = {{"mode", "verify"}, {"seed", c.numerics.seed}, {"timestamp", report::utc_timestamp()}};
  j["checks"] = checks;
  j["passed"] = failed == 0;
  fs::create_directories(c.out_dir);
  write_json(stem_path(c).string() + ".json", j);
  std::cout << "verify: " << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
            << " checks passed in " << std::fixed << std::setprecision(1) << total << std::defaultfloat << " s\n";
  if (failed) throw NumericError("verify: " + std::to_string(failed) + " invariant check(s) failed");
  return 0;
}

int run_command(const std::string& command, const std::string& path, const Overrides& o, bool dump) {
  config::Config c = config::load(path);
  if (config::mode_name(c.mode) != command)
    throw ConfigError("mode: config declares '" + config::mode_name(c.mode) + "' but the command is '" + command + "'");
  apply(c, o);
  if (dump) {
    std::cout << config::normalized(c).dump(2) << "\n";
    return 0;
  }
  switch (c.mode) {
    case config::Mode::coeffs: return run_coeffs(c);
    case config::Mode::spectrum: return run_spectrum(c);
    case config::Mode::sweep:
      return finish_report(c, run::trace_experiment(config::experiment_1d(c), config::alpha_grid(c.numerics)), "sweep");
    case config::Mode::counting:
      return finish_report(c, run::counting_experiment(config::alpha_grid(c.numerics), c.lambda1, c.lambda2,
                                                       config::experiment_1d(c)), "counting");
    case config::Mode::entropy: {
      run::EntropyOptions opt;
      opt.max_dim = c.numerics.max_dim;
      opt.threads = c.threads;
      opt.quad = quadrature(c);
      if (c.omega.type != "intervals") opt.fermi_shape = config::build_domain(c.omega);
      return finish_report(c, run::entropy_experiment(config::entropy_L(c), c.k_F, config::build_domain(c.lambda), opt),
                           "entropy");
    }
    case config::Mode::verify: return run_verify(c);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-term trace asymptotics for truncated Wiener-Hopf operators"};
  app.require_subcommand(1, 1);
  std::string path;
  Overrides o;
  bool dump = false;
  double alpha_max = 0.0;
  std::string out;
  int threads = 0;
  for (const char* name : {"coeffs", "spectrum", "sweep", "counting", "entropy", "verify"}) {
    auto* sub = app.add_subcommand(name, std::string("run a '") + name + "' config");
    sub->add_option("config", path, "experiment config (JSON)")->required();
    sub->add_option("--alpha-max", alpha_max, "drop alphas above this value");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = logical cores)");
    sub->add_flag("--dump-normalized", dump, "print the normalized config and exit");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const auto* sub = app.get_subcommands().front();
  if (sub->count("--alpha-max")) o.alpha_max = alpha_max;
  if (sub->count("--out")) o.out = out;
  if (sub->count("--threads")) o.threads = threads;
  try {
    return run_command(sub->get_name(), path, o, dump);
  } catch (const std::invalid_argument& e) {
    std::cerr << "wtrace: invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "wtrace: numeric failure: " << e.what() << "\n";
    return 3;
  }
}
