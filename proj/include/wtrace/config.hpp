#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wtrace/domain.hpp"
#include "wtrace/runner.hpp"
#include "wtrace/symbol.hpp"

namespace wtrace::config {

enum class Mode { coeffs, spectrum, sweep, counting, entropy, verify };

std::string mode_name(Mode m);

struct DomainSpec {
  std::string type = "intervals";  ///< intervals, disk, ellipse, superellipse, fourier, annulus
  std::vector<std::pair<double, double>> intervals{{0.0, 1.0}};
  double radius = 1.0;
  std::vector<double> center{0.0, 0.0};
  std::vector<double> semi_axes{1.0, 1.0};
  double half_width = 1.0;
  int exponent = 8;
  double a0 = 1.0;
  std::vector<double> cos_coeffs, sin_coeffs;
  double inner = 0.5, outer = 1.0;
};

struct SymbolSpec {
  std::string type = "constant";  ///< constant, multiplier, tabulated
  double value = 1.0;
  double imag = 0.0;
  std::string name = "gaussian";  ///< multiplier: gaussian, lorentzian, ramp
  double scale = 1.0;
  std::vector<double> xi, values;  ///< tabulated, piecewise linear
};

struct GSpec {
  std::string type = "polynomial";  ///< polynomial, power, series, entropy, indicator
  std::vector<double> coefficients{1.0, -1.0};
  int power = 2;
  double radius = 1.0;
  double lambda1 = 0.05, lambda2 = 0.95, width = 0.05;
};

struct Numerics {
  double points_per_wavelength = 8.0;
  double panel_periods = 2.0;
  std::size_t max_dim = 12000;
  std::vector<double> alphas;  ///< explicit list; else the range below
  double alpha_min = 50.0, alpha_max = 800.0;
  int alpha_count = 8;
  int boundary_nodes = 512;
  int outer_nodes = 48, inner_nodes = 16;
  double tolerance = 1e-12;
  unsigned seed = 1;
};

struct Config {
  Mode mode = Mode::sweep;
  std::string operator_mode = "T";  ///< T or S
  DomainSpec lambda;
  DomainSpec omega = [] {
    DomainSpec d;
    d.intervals = {{-1.0, 1.0}};
    return d;
  }();
  SymbolSpec symbol;
  GSpec g;
  Numerics numerics;
  double lambda1 = 0.05, lambda2 = 0.95;  ///< counting window
  int phase_samples = 32;                 ///< counting: alphas averaged per staircase period
  std::vector<int> L_list;                ///< entropy; default 10..40 step 2
  double k_F = 1.0;
  std::string out_dir = "out";
  std::string stem;  ///< default: mode name
  std::string cache_dir;
  int threads = 0;
};

/// Strict parse: unknown keys and out-of-range knobs raise ConfigError naming
/// the offending key.
Config parse(const nlohmann::json& j);
Config load(const std::string& path);

/// Fully populated form; parse(normalized(c)) == c.
nlohmann::ordered_json normalized(const Config& c);

geom::Domain build_domain(const DomainSpec& s);
ScalarSymbol build_symbol(const SymbolSpec& s);
SymbolFunction build_g(const GSpec& s);
std::vector<double> alpha_grid(const Numerics& n);
std::vector<int> entropy_L(const Config& c);
run::Experiment1d experiment_1d(const Config& c);

}  // namespace wtrace::config
