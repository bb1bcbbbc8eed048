#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wtrace/cache.hpp"
#include "wtrace/error.hpp"
#include "wtrace/io.hpp"
#include "wtrace/report.hpp"
#include "wtrace/runner.hpp"

using namespace wtrace;
using namespace wtrace::run;
namespace fs = std::filesystem;

namespace {

SweepSeries synthetic(const std::vector<double>& alphas, int d, double c1, double c2, double c3) {
  SweepSeries s;
  s.dimension = d;
  for (double a : alphas)
    s.entries.push_back({a, c1 * std::pow(a, d) + c2 * std::pow(a, d - 1) * std::log(a) + c3 * std::pow(a, d - 1), 0.0, 0});
  return s;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wtrace_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("log_spaced hits both ends and is geometric") {
  const auto a = log_spaced(50.0, 800.0, 5);
  REQUIRE(a.size() == 5);
  CHECK(a.front() == 50.0);
  CHECK(a.back() == 800.0);
  CHECK(a[2] == doctest::Approx(200.0));
}

TEST_CASE("fit recovers in-span data exactly") {
  const auto alphas = log_spaced(10.0, 1000.0, 7);
  for (int d : {1, 2}) {
    const auto f = fit_two_term(synthetic(alphas, d, -3.5e5, 7.25e5, 9.9e5), d);
    CHECK(f.c_d == doctest::Approx(-3.5e5).epsilon(1e-10));
    CHECK(f.c_log == doctest::Approx(7.25e5).epsilon(1e-10));
    CHECK(f.c_sub == doctest::Approx(9.9e5).epsilon(1e-10));
    CHECK(f.residual_rms < 1e-13 * 7.25e5 * std::pow(1000.0, d));
  }
}

TEST_CASE("fit preconditions") {
  CHECK_THROWS_AS(fit_two_term(synthetic({10, 20, 40}, 1, 1, 1, 1), 1), PreconditionError);
  CHECK_THROWS_AS(fit_two_term(synthetic({10, 11, 12, 13, 14}, 1, 1, 1, 1), 1), PreconditionError);
  CHECK_THROWS_AS(fit_two_term(synthetic({10, 20, 40, 80}, 3, 1, 1, 1), 3), PreconditionError);
}

TEST_CASE("fit standard errors track the noise level") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1e-3);
  auto s = synthetic(log_spaced(50.0, 800.0, 16), 1, 0.0, 0.1, 0.3);
  for (auto& e : s.entries) {
    e.value += n(rng);
    e.estimate = 1e-3;
  }
  const auto f = fit_two_term(s, 1);
  CHECK(f.weighted);
  CHECK(std::fabs(f.c_log - 0.1) < 5.0 * f.stderr_log);
  CHECK(f.stderr_log < 0.05);
}

TEST_CASE("predicted coefficients for the sine kernel and for disks") {
  const auto one = ScalarSymbol::constant(1.0);
  const auto p = predict_coefficients(one, SymbolFunction::polynomial({1.0, -1.0}), geom::Domain::intervals({{0.0, 1.0}}),
                                      geom::Domain::intervals({{-1.0, 1.0}}));
  CHECK(p.w0_term == 0.0);
  CHECK(p.w1_term == doctest::Approx(1.0 / (oracle::pi * oracle::pi)).epsilon(1e-12));
  const auto q = predict_coefficients(one, SymbolFunction::entropy(), geom::Domain::disk(1.0), geom::Domain::disk(1.0));
  CHECK(q.w0_term == 0.0);
  CHECK(std::fabs(q.w1_term - 4.0 * oracle::A_entropy) <= q.w1_error + 1e-9);
  CHECK_THROWS_AS(predict_coefficients(ScalarSymbol::constant(std::complex<double>(1.0, 0.5)), SymbolFunction::power(2),
                                       geom::Domain::disk(1.0), geom::Domain::disk(1.0)),
                  PreconditionError);
}

TEST_CASE("sweep values are the single-alpha measurements") {
  Experiment1d e;
  const auto alphas = log_spaced(40.0, 160.0, 4);
  const auto s = sweep_trace(e, alphas);
  REQUIRE(s.entries.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.entries[i].value == measure_1d(e, alphas[i]));
    CHECK(s.entries[i].estimate >= 0.0);
    CHECK(s.entries[i].dim > 0);
  }
  CHECK(s.metadata["observable"] == "trace");
  CHECK_THROWS_AS(sweep_trace(e, {100.0, 50.0}), PreconditionError);
}

TEST_CASE("trace experiment: Landau-Widom slope from a short sweep") {
  Experiment1d e;
  const auto r = trace_experiment(e, log_spaced(40.0, 320.0, 6));
  CHECK(r.fit.c_log == doctest::Approx(1.0 / (oracle::pi * oracle::pi)).epsilon(0.01));
  CHECK(std::fabs(r.fit.c_d) < 1e-5);
  REQUIRE(r.relative_error_log.has_value());
  CHECK_FALSE(r.relative_error_leading.has_value());
}

TEST_CASE("counting averages over one staircase period") {
  Experiment1d e;
  CHECK(staircase_period(e) == doctest::Approx(oracle::pi));
  e.count_window = std::make_pair(0.05, 0.95);
  e.mode = Mode::S;
  e.phase_samples = 4;
  double mean = 0.0;
  for (int j = 0; j < 4; ++j) {
    Experiment1d single = e;
    single.phase_samples = 1;
    mean += measure_1d(single, 100.0 - oracle::pi * j / 4.0);
  }
  CHECK(measure_1d(e, 100.0) == doctest::Approx(mean / 4.0));
}

TEST_CASE("spectrum cache round-trips and keys by content") {
  const fs::path dir = scratch("cache");
  cache::Store store(dir);
  ops::Spectrum s{{0.1, 0.5, 0.99}, 42.0};
  store.store_spectrum("key-a", s);
  const auto back = store.load_spectrum("key-a");
  REQUIRE(back.has_value());
  CHECK(back->eigenvalues == s.eigenvalues);
  CHECK(back->alpha == 42.0);
  CHECK_FALSE(store.load_spectrum("key-b").has_value());
  CHECK(cache::content_hash("abc") != cache::content_hash("abd"));

  Experiment1d e;
  e.cache_dir = (dir / "sweep").string();
  const double first = measure_1d(e, 90.0);
  CHECK(std::distance(fs::directory_iterator(e.cache_dir), fs::directory_iterator{}) == 1);
  CHECK(measure_1d(e, 90.0) == first);
  fs::remove_all(dir);
}

TEST_CASE("reports: CSV round-trips doubles and JSON carries the sections") {
  Experiment1d e;
  const auto r = trace_experiment(e, log_spaced(40.0, 160.0, 4));
  const std::string csv = report::to_csv(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "alpha,value,estimate,dim");
  std::getline(in, line);
  const double v = std::stod(line.substr(line.find(',') + 1));
  CHECK(v == r.series.entries[0].value);
  CHECK(io::format_double(0.1) == "0.10000000000000001");

  const auto j = report::to_json(r, "T");
  for (const char* key : {"experiment", "series", "fit", "prediction", "relative_errors"}) CHECK(j.contains(key));
  CHECK(j["experiment"]["timestamp"] == "T");

  const fs::path dir = scratch("report");
  report::write_all(r, dir / "x");
  for (const char* ext : {".json", ".csv", ".dat"}) CHECK(fs::exists(dir / (std::string("x") + ext)));
  CHECK_FALSE(fs::exists(dir / "x.json.tmp"));
  fs::remove_all(dir);
}

TEST_CASE("entropy experiment marks itself exploratory") {
  EntropyOptions opt;
  const auto r = entropy_experiment({6, 8, 12, 16, 24}, 1.0, geom::Domain::disk(1.0), opt);
  CHECK(r.exploratory);
  CHECK(r.series.dimension == 2);
  CHECK(std::fabs(r.prediction.w1_term - 4.0 * oracle::A_entropy) <= r.prediction.w1_error + 1e-9);
  CHECK(r.series.metadata.contains("alpha_convention"));
  CHECK_THROWS_AS(entropy_experiment({2, 3, 4, 5}, 1.0, geom::Domain::disk(1.0), opt), PreconditionError);
}
