#include "wtrace/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "wtrace/io.hpp"

namespace wtrace::report {

using io::format_double;

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const run::ComparisonReport& r, const std::string& timestamp) {
  nlohmann::ordered_json j;
  auto exp = r.series.metadata;
  exp["dimension"] = r.series.dimension;
  exp["exploratory"] = r.exploratory;
  exp["timestamp"] = timestamp;
  j["experiment"] = exp;
  auto series = nlohmann::ordered_json::array();
  for (const auto& e : r.series.entries)
    series.push_back({{"alpha", e.alpha}, {"value", e.value}, {"estimate", e.estimate}, {"dim", e.dim}});
  j["series"] = series;
  j["fit"] = {{"c_d", r.fit.c_d},
              {"c_log", r.fit.c_log},
              {"c_sub", r.fit.c_sub},
              {"residual_rms", r.fit.residual_rms},
              {"condition", r.fit.condition},
              {"stderr", {{"c_d", r.fit.stderr_d}, {"c_log", r.fit.stderr_log}, {"c_sub", r.fit.stderr_sub}}},
              {"weighted", r.fit.weighted}};
  j["prediction"] = {{"w0_term", r.prediction.w0_term},
                     {"w1_term", r.prediction.w1_term},
                     {"w0_error", r.prediction.w0_error},
                     {"w1_error", r.prediction.w1_error}};
  j["relative_errors"] = {{"leading", optional_number(r.relative_error_leading)},
                          {"log", optional_number(r.relative_error_log)},
                          {"leading_absolute", r.absolute_error_leading}};
  return j;
}

std::string to_csv(const run::ComparisonReport& r) {
  std::ostringstream os;
  os << "alpha,value,estimate,dim\n";
  for (const auto& e : r.series.entries)
    os << format_double(e.alpha) << "," << format_double(e.value) << "," << format_double(e.estimate) << ","
       << e.dim << "\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("nan"); };
  os << "# c_d," << format_double(r.fit.c_d) << "\n"
     << "# c_log," << format_double(r.fit.c_log) << "\n"
     << "# c_sub," << format_double(r.fit.c_sub) << "\n"
     << "# residual_rms," << format_double(r.fit.residual_rms) << "\n"
     << "# condition," << format_double(r.fit.condition) << "\n"
     << "# w0_term," << format_double(r.prediction.w0_term) << "\n"
     << "# w1_term," << format_double(r.prediction.w1_term) << "\n"
     << "# relative_error_leading," << opt(r.relative_error_leading) << "\n"
     << "# relative_error_log," << opt(r.relative_error_log) << "\n";
  return os.str();
}

std::string to_plot_data(const run::ComparisonReport& r) {
  const int d = r.series.dimension;
  std::ostringstream os;
  os << "# log_alpha residual_over_alpha^(d-1)\n";
  for (const auto& e : r.series.entries) {
    const double y = (e.value - r.fit.c_d * std::pow(e.alpha, d)) / std::pow(e.alpha, d - 1);
    os << format_double(std::log(e.alpha)) << " " << format_double(y) << "\n";
  }
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_all(const run::ComparisonReport& r, const std::filesystem::path& stem) {
  auto with = [&](const char* ext) {
    std::filesystem::path p = stem;
    p += ext;
    return p;
  };
  io::atomic_write(with(".json"), to_json(r, utc_timestamp()).dump(2) + "\n");
  io::atomic_write(with(".csv"), to_csv(r));
  io::atomic_write(with(".dat"), to_plot_data(r));
}

std::string summary_line(const std::string& name, const run::ComparisonReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << name << ": c_log = " << r.fit.c_log << " (predicted " << r.prediction.w1_term << ")";
  if (r.relative_error_log) os << ", rel. error " << *r.relative_error_log;
  os << "; c_d = " << r.fit.c_d << " (predicted " << r.prediction.w0_term << ")";
  if (r.exploratory) os << " [exploratory]";
  return os.str();
}

}  // namespace wtrace::report
