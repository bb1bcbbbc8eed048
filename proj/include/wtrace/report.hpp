#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "wtrace/runner.hpp"

namespace wtrace::report {

/// Top-level keys: experiment, series, fit, prediction, relative_errors. The
/// only non-deterministic field is experiment.timestamp.
nlohmann::ordered_json to_json(const run::ComparisonReport& r, const std::string& timestamp);

/// One row per alpha, then a summary block of '#'-prefixed lines.
std::string to_csv(const run::ComparisonReport& r);

/// Columns: log alpha, value / alpha^{d-1} after removing the fitted alpha^d term.
std::string to_plot_data(const run::ComparisonReport& r);

/// UTC time in ISO 8601.
std::string utc_timestamp();

/// Writes <stem>.json, <stem>.csv and <stem>.dat atomically.
void write_all(const run::ComparisonReport& r, const std::filesystem::path& stem);

/// One-line human summary.
std::string summary_line(const std::string& name, const run::ComparisonReport& r);

}  // namespace wtrace::report
