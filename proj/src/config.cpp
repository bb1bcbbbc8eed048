#include "wtrace/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fstream>
#include <set>
#include <sstream>

#include "wtrace/error.hpp"

namespace wtrace::config {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// Object reader that remembers which keys were consumed.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + ": wrong type");
    }
  }

  const json& sub(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "config" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError("unknown key '" + where(it.key()) + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void check(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

DomainSpec parse_domain(const json& j, const std::string& path) {
  Obj o(j, path);
  DomainSpec d;
  d.type = o.get<std::string>("type", d.type);
  if (d.type == "intervals") {
    d.intervals = o.get("intervals", d.intervals);
    check(!d.intervals.empty(), o.where("intervals"), "must not be empty");
    for (const auto& [l, r] : d.intervals) check(std::isfinite(l) && std::isfinite(r) && l < r, o.where("intervals"), "need left < right");
  } else if (d.type == "disk") {
    d.radius = o.get("radius", d.radius);
    d.center = o.get("center", d.center);
    check(d.radius > 0.0, o.where("radius"), "must be positive");
    check(d.center.size() == 2, o.where("center"), "needs two coordinates");
  } else if (d.type == "ellipse") {
    d.semi_axes = o.get("semi_axes", d.semi_axes);
    check(d.semi_axes.size() == 2 && d.semi_axes[0] > 0.0 && d.semi_axes[1] > 0.0, o.where("semi_axes"),
          "needs two positive values");
  } else if (d.type == "superellipse") {
    d.half_width = o.get("half_width", d.half_width);
    d.exponent = o.get("exponent", d.exponent);
    check(d.half_width > 0.0, o.where("half_width"), "must be positive");
    check(d.exponent >= 2 && d.exponent <= 64 && d.exponent % 2 == 0, o.where("exponent"), "must be even in [2, 64]");
  } else if (d.type == "fourier") {
    d.a0 = o.get("a0", d.a0);
    d.cos_coeffs = o.get("cos", d.cos_coeffs);
    d.sin_coeffs = o.get("sin", d.sin_coeffs);
    double sum = 0.0;
    for (double c : d.cos_coeffs) sum += std::fabs(c);
    for (double c : d.sin_coeffs) sum += std::fabs(c);
    check(d.a0 > sum, o.where("a0"), "must exceed the sum of |coefficients| so that r > 0");
  } else if (d.type == "annulus") {
    d.inner = o.get("inner", d.inner);
    d.outer = o.get("outer", d.outer);
    check(0.0 < d.inner && d.inner < d.outer, o.where("inner"), "need 0 < inner < outer");
  } else {
    throw ConfigError(o.where("type") + ": unknown domain type '" + d.type + "'");
  }
  o.finish();
  return d;
}

ojson domain_json(const DomainSpec& d) {
  ojson j;
  j["type"] = d.type;
  if (d.type == "intervals") j["intervals"] = d.intervals;
  if (d.type == "disk") {
    j["radius"] = d.radius;
    j["center"] = d.center;
  }
  if (d.type == "ellipse") j["semi_axes"] = d.semi_axes;
  if (d.type == "superellipse") {
    j["half_width"] = d.half_width;
    j["exponent"] = d.exponent;
  }
  if (d.type == "fourier") {
    j["a0"] = d.a0;
    j["cos"] = d.cos_coeffs;
    j["sin"] = d.sin_coeffs;
  }
  if (d.type == "annulus") {
    j["inner"] = d.inner;
    j["outer"] = d.outer;
  }
  return j;
}

SymbolSpec parse_symbol(const json& j) {
  Obj o(j, "symbol");
  SymbolSpec s;
  s.type = o.get<std::string>("type", s.type);
  if (s.type == "constant") {
    s.value = o.get("value", s.value);
    s.imag = o.get("imag", s.imag);
  } else if (s.type == "multiplier") {
    s.name = o.get<std::string>("name", s.name);
    s.scale = o.get("scale", s.scale);
    check(s.name == "gaussian" || s.name == "lorentzian" || s.name == "ramp", o.where("name"),
          "unknown multiplier '" + s.name + "' (gaussian, lorentzian, ramp)");
    check(s.scale > 0.0, o.where("scale"), "must be positive");
  } else if (s.type == "tabulated") {
    s.xi = o.get("xi", s.xi);
    s.values = o.get("values", s.values);
    check(s.xi.size() >= 2 && s.xi.size() == s.values.size(), o.where("xi"), "need >= 2 nodes matching 'values'");
    for (std::size_t i = 1; i < s.xi.size(); ++i) check(s.xi[i] > s.xi[i - 1], o.where("xi"), "must increase strictly");
  } else {
    throw ConfigError(o.where("type") + ": unknown symbol type '" + s.type + "'");
  }
  o.finish();
  return s;
}

ojson symbol_json(const SymbolSpec& s) {
  ojson j;
  j["type"] = s.type;
  if (s.type == "constant") {
    j["value"] = s.value;
    j["imag"] = s.imag;
  }
  if (s.type == "multiplier") {
    j["name"] = s.name;
    j["scale"] = s.scale;
  }
  if (s.type == "tabulated") {
    j["xi"] = s.xi;
    j["values"] = s.values;
  }
  return j;
}

GSpec parse_g(const json& j) {
  Obj o(j, "g");
  GSpec g;
  g.type = o.get<std::string>("type", g.type);
  if (g.type == "polynomial") {
    g.coefficients = o.get("coefficients", g.coefficients);
    check(!g.coefficients.empty(), o.where("coefficients"), "must not be empty");
  } else if (g.type == "power") {
    g.power = o.get("p", g.power);
    check(g.power >= 1 && g.power <= 64, o.where("p"), "must be in [1, 64]");
  } else if (g.type == "series") {
    g.coefficients = o.get("coefficients", g.coefficients);
    g.radius = o.get("radius", g.radius);
    check(!g.coefficients.empty(), o.where("coefficients"), "must not be empty");
    check(g.radius > 0.0, o.where("radius"), "must be positive");
  } else if (g.type == "indicator") {
    g.lambda1 = o.get("lambda1", g.lambda1);
    g.lambda2 = o.get("lambda2", g.lambda2);
    g.width = o.get("width", g.width);
    check(g.lambda1 < g.lambda2, o.where("lambda1"), "need lambda1 < lambda2");
    check(g.width > 0.0 && g.width < g.lambda2 - g.lambda1, o.where("width"), "must be in (0, lambda2 - lambda1)");
  } else if (g.type != "entropy") {
    throw ConfigError(o.where("type") + ": unknown g type '" + g.type + "'");
  }
  o.finish();
  return g;
}

ojson g_json(const GSpec& g) {
  ojson j;
  j["type"] = g.type;
  if (g.type == "polynomial") j["coefficients"] = g.coefficients;
  if (g.type == "power") j["p"] = g.power;
  if (g.type == "series") {
    j["coefficients"] = g.coefficients;
    j["radius"] = g.radius;
  }
  if (g.type == "indicator") {
    j["lambda1"] = g.lambda1;
    j["lambda2"] = g.lambda2;
    j["width"] = g.width;
  }
  return j;
}

Numerics parse_numerics(const json& j) {
  Obj o(j, "numerics");
  Numerics n;
  n.points_per_wavelength = o.get("points_per_wavelength", n.points_per_wavelength);
  n.panel_periods = o.get("panel_periods", n.panel_periods);
  n.max_dim = o.get("max_dim", n.max_dim);
  n.alphas = o.get("alphas", n.alphas);
  n.alpha_min = o.get("alpha_min", n.alpha_min);
  n.alpha_max = o.get("alpha_max", n.alpha_max);
  n.alpha_count = o.get("alpha_count", n.alpha_count);
  n.boundary_nodes = o.get("boundary_nodes", n.boundary_nodes);
  n.outer_nodes = o.get("outer_nodes", n.outer_nodes);
  n.inner_nodes = o.get("inner_nodes", n.inner_nodes);
  n.tolerance = o.get("tolerance", n.tolerance);
  n.seed = o.get("seed", n.seed);
  o.finish();
  check(n.points_per_wavelength >= 6.0 && n.points_per_wavelength <= 64.0, "numerics.points_per_wavelength",
        "must be in [6, 64]");
  check(n.panel_periods > 0.0 && n.panel_periods <= 8.0, "numerics.panel_periods", "must be in (0, 8]");
  check(n.max_dim >= 32 && n.max_dim <= 20000, "numerics.max_dim", "must be in [32, 20000]");
  for (std::size_t i = 0; i < n.alphas.size(); ++i) {
    check(n.alphas[i] > 0.0, "numerics.alphas", "must be positive");
    if (i > 0) check(n.alphas[i] > n.alphas[i - 1], "numerics.alphas", "must increase strictly");
  }
  check(n.alpha_min > 0.0 && n.alpha_max > n.alpha_min, "numerics.alpha_min", "need 0 < alpha_min < alpha_max");
  check(n.alpha_count >= 2 && n.alpha_count <= 64, "numerics.alpha_count", "must be in [2, 64]");
  check(n.boundary_nodes >= 16 && n.boundary_nodes <= 65536, "numerics.boundary_nodes", "must be in [16, 65536]");
  check(n.outer_nodes >= 4 && n.outer_nodes <= 4096, "numerics.outer_nodes", "must be in [4, 4096]");
  check(n.inner_nodes >= 2 && n.inner_nodes <= 1024, "numerics.inner_nodes", "must be in [2, 1024]");
  check(n.tolerance > 0.0 && n.tolerance <= 1e-3, "numerics.tolerance", "must be in (0, 1e-3]");
  return n;
}

ojson numerics_json(const Numerics& n) {
  ojson j;
  j["points_per_wavelength"] = n.points_per_wavelength;
  j["panel_periods"] = n.panel_periods;
  j["max_dim"] = n.max_dim;
  j["alphas"] = n.alphas;
  j["alpha_min"] = n.alpha_min;
  j["alpha_max"] = n.alpha_max;
  j["alpha_count"] = n.alpha_count;
  j["boundary_nodes"] = n.boundary_nodes;
  j["outer_nodes"] = n.outer_nodes;
  j["inner_nodes"] = n.inner_nodes;
  j["tolerance"] = n.tolerance;
  j["seed"] = n.seed;
  return j;
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::coeffs, Mode::spectrum, Mode::sweep, Mode::counting, Mode::entropy, Mode::verify})
    if (mode_name(m) == s) return m;
  throw ConfigError("mode: unknown mode '" + s + "'");
}

}  // namespace

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::coeffs: return "coeffs";
    case Mode::spectrum: return "spectrum";
    case Mode::sweep: return "sweep";
    case Mode::counting: return "counting";
    case Mode::entropy: return "entropy";
    case Mode::verify: return "verify";
  }
  return "?";
}

Config parse(const json& j) {
  Obj o(j, "");
  Config c;
  c.mode = parse_mode(o.get<std::string>("mode", "sweep"));
  c.operator_mode = o.get<std::string>("operator", c.operator_mode);
  check(c.operator_mode == "T" || c.operator_mode == "S", "operator", "must be 'T' or 'S'");
  if (o.has("lambda")) c.lambda = parse_domain(o.sub("lambda"), "lambda");
  if (o.has("omega")) c.omega = parse_domain(o.sub("omega"), "omega");
  if (o.has("symbol")) c.symbol = parse_symbol(o.sub("symbol"));
  if (o.has("g")) c.g = parse_g(o.sub("g"));
  if (o.has("numerics")) c.numerics = parse_numerics(o.sub("numerics"));
  if (o.has("counting")) {
    Obj w(o.sub("counting"), "counting");
    c.lambda1 = w.get("lambda1", c.lambda1);
    c.lambda2 = w.get("lambda2", c.lambda2);
    c.phase_samples = w.get("phase_samples", c.phase_samples);
    w.finish();
  }
  check(c.lambda1 < c.lambda2 && (c.lambda1 > 0.0 || c.lambda2 < 0.0), "counting.lambda1",
        "need lambda1 < lambda2 with 0 outside the window");
  check(c.phase_samples >= 1 && c.phase_samples <= 256, "counting.phase_samples", "must be in [1, 256]");
  if (o.has("entropy")) {
    Obj e(o.sub("entropy"), "entropy");
    c.L_list = e.get("L", c.L_list);
    c.k_F = e.get("k_F", c.k_F);
    e.finish();
  }
  check(c.k_F > 0.0 && c.k_F < std::numbers::pi, "entropy.k_F", "must be in (0, pi)");
  for (std::size_t i = 0; i < c.L_list.size(); ++i) {
    check(c.L_list[i] > 0, "entropy.L", "must be positive");
    if (i > 0) check(c.L_list[i] > c.L_list[i - 1], "entropy.L", "must increase strictly");
  }
  if (o.has("output")) {
    Obj out(o.sub("output"), "output");
    c.out_dir = out.get<std::string>("dir", c.out_dir);
    c.stem = out.get<std::string>("stem", c.stem);
    c.cache_dir = out.get<std::string>("cache_dir", c.cache_dir);
    out.finish();
  }
  if (c.stem.empty()) c.stem = mode_name(c.mode);
  c.threads = o.get("threads", c.threads);
  check(c.threads >= 0 && c.threads <= 1024, "threads", "must be in [0, 1024]");
  o.finish();
  return c;
}

Config load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse(j);
}

nlohmann::ordered_json normalized(const Config& c) {
  ojson j;
  j["mode"] = mode_name(c.mode);
  j["operator"] = c.operator_mode;
  j["lambda"] = domain_json(c.lambda);
  j["omega"] = domain_json(c.omega);
  j["symbol"] = symbol_json(c.symbol);
  j["g"] = g_json(c.g);
  j["numerics"] = numerics_json(c.numerics);
  j["counting"] = {{"lambda1", c.lambda1}, {"lambda2", c.lambda2}, {"phase_samples", c.phase_samples}};
  j["entropy"] = {{"L", c.L_list}, {"k_F", c.k_F}};
  j["output"] = {{"dir", c.out_dir}, {"stem", c.stem}, {"cache_dir", c.cache_dir}};
  j["threads"] = c.threads;
  return j;
}

geom::Domain build_domain(const DomainSpec& s) {
  if (s.type == "intervals") {
    std::vector<geom::Interval> iv;
    for (const auto& [l, r] : s.intervals) iv.push_back({l, r});
    return geom::Domain::intervals(std::move(iv));
  }
  if (s.type == "disk") return geom::Domain::disk(s.radius, Eigen::Vector2d(s.center[0], s.center[1]));
  if (s.type == "ellipse") return geom::Domain::ellipse(s.semi_axes[0], s.semi_axes[1]);
  if (s.type == "superellipse")
    return geom::Domain::parametric(geom::RadiusFunction::superellipse(s.half_width, s.exponent));
  if (s.type == "fourier")
    return geom::Domain::parametric(geom::RadiusFunction::fourier(s.a0, s.cos_coeffs, s.sin_coeffs));
  if (s.type == "annulus") return geom::Domain::annulus(s.inner, s.outer);
  throw ConfigError("unknown domain type '" + s.type + "'");
}

ScalarSymbol build_symbol(const SymbolSpec& s) {
  using cd = std::complex<double>;
  if (s.type == "constant") return ScalarSymbol::constant(cd(s.value, s.imag));
  if (s.type == "multiplier") {
    const double k = s.scale;
    std::ostringstream name;
    name << s.name << "(" << k << ")";
    if (s.name == "gaussian") return ScalarSymbol::multiplier(name.str(), [k](double x) { return cd(std::exp(-x * x / (k * k))); });
    if (s.name == "lorentzian")
      return ScalarSymbol::multiplier(name.str(), [k](double x) { return cd(1.0 / (1.0 + x * x / (k * k))); });
    return ScalarSymbol::multiplier(name.str(), [k](double x) { return cd(1.0 + 0.5 * x / k); });
  }
  if (s.type == "tabulated") {
    auto xi = s.xi;
    auto v = s.values;
    std::ostringstream name;
    name << "tabulated[" << xi.size() << "](";
    for (std::size_t i = 0; i < xi.size(); ++i) name << (i ? ";" : "") << xi[i] << ":" << v[i];
    name << ")";
    return ScalarSymbol::multiplier(name.str(), [xi, v](double x) {
      if (x <= xi.front()) return cd(v.front());
      if (x >= xi.back()) return cd(v.back());
      const auto it = std::upper_bound(xi.begin(), xi.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - xi.begin());
      const double t = (x - xi[k - 1]) / (xi[k] - xi[k - 1]);
      return cd((1.0 - t) * v[k - 1] + t * v[k]);
    });
  }
  throw ConfigError("unknown symbol type '" + s.type + "'");
}

SymbolFunction build_g(const GSpec& s) {
  if (s.type == "polynomial") return SymbolFunction::polynomial(s.coefficients);
  if (s.type == "power") return SymbolFunction::power(s.power);
  if (s.type == "series") return SymbolFunction::series(s.coefficients, s.radius);
  if (s.type == "entropy") return SymbolFunction::entropy();
  if (s.type == "indicator") return SymbolFunction::mollified_indicator(s.lambda1, s.lambda2, s.width);
  throw ConfigError("unknown g type '" + s.type + "'");
}

std::vector<double> alpha_grid(const Numerics& n) {
  if (!n.alphas.empty()) return n.alphas;
  return run::log_spaced(n.alpha_min, n.alpha_max, n.alpha_count);
}

std::vector<int> entropy_L(const Config& c) {
  if (!c.L_list.empty()) return c.L_list;
  std::vector<int> L;
  for (int v = 10; v <= 40; v += 2) L.push_back(v);
  return L;
}

run::Experiment1d experiment_1d(const Config& c) {
  if (c.lambda.type != "intervals" || c.omega.type != "intervals")
    throw ConfigError("lambda/omega: this mode needs one-dimensional 'intervals' domains");
  run::Experiment1d e;
  e.lambda.intervals.clear();
  for (const auto& [l, r] : c.lambda.intervals) e.lambda.intervals.push_back({l, r});
  e.omega.intervals.clear();
  for (const auto& [l, r] : c.omega.intervals) e.omega.intervals.push_back({l, r});
  e.a = build_symbol(c.symbol);
  e.g = build_g(c.g);
  e.mode = c.operator_mode == "S" ? run::Mode::S : run::Mode::T;
  e.nystrom.points_per_wavelength = c.numerics.points_per_wavelength;
  e.nystrom.panel_periods = c.numerics.panel_periods;
  e.nystrom.max_dim = c.numerics.max_dim;
  e.nystrom.threads = c.threads;
  e.cache_dir = c.cache_dir;
  e.threads = c.threads;
  e.phase_samples = c.phase_samples;
  return e;
}

}  // namespace wtrace::config
