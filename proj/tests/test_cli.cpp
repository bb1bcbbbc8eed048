#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "oracles.hpp"
#include "wtrace/config.hpp"
#include "wtrace/error.hpp"

namespace fs = std::filesystem;
using wtrace::ConfigError;
using json = nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output.
Run cli(const std::string& args) {
  const std::string cmd = std::string(WTRACE_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int raw = pclose(p);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

fs::path scratch() {
  const fs::path p = fs::temp_directory_path() / "wtrace_cli_test";
  fs::create_directories(p);
  return p;
}

std::string write(const std::string& name, const std::string& body) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << body;
  return p.string();
}

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string configs = WTRACE_CONFIG_DIR;

}  // namespace

TEST_CASE("unknown keys exit 2 and name the key") {
  const auto path = write("bad.json", R"({"mode": "sweep", "numerics": {"points_per_wavelenght": 8}})");
  const Run r = cli("sweep " + path);
  CHECK(r.status == 2);
  CHECK(r.out.find("numerics.points_per_wavelenght") != std::string::npos);
}

TEST_CASE("out-of-range knobs and mode mismatches exit 2") {
  CHECK(cli("sweep " + write("ppw.json", R"({"mode": "sweep", "numerics": {"points_per_wavelength": 2}})")).status == 2);
  CHECK(cli("coeffs " + configs + "/landau_widom.json").status == 2);
  CHECK(cli("sweep /nonexistent/config.json").status == 2);
  CHECK(cli("sweep " + write("broken.json", "{\"mode\": ")).status == 2);
}

TEST_CASE("numeric failures exit 3 and name the operation") {
  const auto path = write("tight.json", R"({"mode": "coeffs", "g": {"type": "entropy"},
    "lambda": {"type": "disk"}, "omega": {"type": "disk"},
    "numerics": {"tolerance": 1e-300}, "output": {"dir": ")" + (scratch() / "tight").string() + R"("}})");
  const Run r = cli("coeffs " + path);
  CHECK(r.status == 3);
  CHECK(r.out.find("numeric failure") != std::string::npos);
}

TEST_CASE("coeffs disk/disk entropy: w1_term is 4 A(h)") {
  const fs::path out = scratch() / "coeffs";
  const Run r = cli("coeffs " + configs + "/coeffs_disk.json --out " + out.string());
  REQUIRE(r.status == 0);
  CHECK(r.out.find("w1_term") != std::string::npos);
  const auto j = json::parse(read(out / "coeffs_disk.json"));
  const double w1 = j["prediction"]["w1_term"], err = j["prediction"]["w1_error"];
  CHECK(std::fabs(w1 - 4.0 * oracle::A_entropy) <= err + 1e-9);
  CHECK(err < 1e-4);
  CHECK(j["prediction"]["w0_term"] == 0.0);
}

TEST_CASE("two runs give identical JSON apart from the timestamp") {
  const fs::path a = scratch() / "det_a", b = scratch() / "det_b";
  REQUIRE(cli("sweep " + configs + "/landau_widom.json --alpha-max 200 --out " + a.string()).status == 0);
  REQUIRE(cli("sweep " + configs + "/landau_widom.json --alpha-max 200 --out " + b.string()).status == 0);
  auto ja = json::parse(read(a / "landau_widom.json")), jb = json::parse(read(b / "landau_widom.json"));
  ja["experiment"].erase("timestamp");
  jb["experiment"].erase("timestamp");
  CHECK(ja.dump() == jb.dump());
  CHECK(read(a / "landau_widom.csv") == read(b / "landau_widom.csv"));
  CHECK(ja["series"].back()["alpha"] == 200.0);
}

TEST_CASE("--dump-normalized output re-parses to the same normalized form") {
  for (const char* name : {"landau_widom", "two_interval", "counting", "entropy_disk", "coeffs_disk", "verify"}) {
    CAPTURE(name);
    const std::string path = configs + "/" + name + ".json";
    const std::string mode = json::parse(read(path))["mode"];
    const Run first = cli(mode + " " + path + " --dump-normalized");
    REQUIRE(first.status == 0);
    const auto again = write(std::string(name) + "_norm.json", first.out);
    const Run second = cli(mode + " " + again + " --dump-normalized");
    REQUIRE(second.status == 0);
    CHECK(first.out == second.out);
    CHECK(wtrace::config::normalized(wtrace::config::parse(json::parse(first.out))).dump(2) + "\n" == first.out);
  }
}

TEST_CASE("overrides apply to the normalized config") {
  const Run r = cli("sweep " + configs + "/landau_widom.json --alpha-max 400 --threads 2 --out elsewhere --dump-normalized");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["numerics"]["alpha_max"] == 400.0);
  CHECK(j["threads"] == 2);
  CHECK(j["output"]["dir"] == "elsewhere");
  CHECK(cli("sweep " + configs + "/landau_widom.json --alpha-max 10").status == 2);
}

TEST_CASE("config parser: defaults, bounds and builders") {
  const auto c = wtrace::config::parse(json::parse(R"({"mode": "entropy"})"));
  CHECK(wtrace::config::entropy_L(c).front() == 10);
  CHECK(wtrace::config::entropy_L(c).back() == 40);
  CHECK(wtrace::config::alpha_grid(c.numerics).size() == 8);
  CHECK_THROWS_AS(wtrace::config::parse(json::parse(R"({"mode": "nope"})")), ConfigError);
  CHECK_THROWS_AS(wtrace::config::parse(json::parse(R"({"entropy": {"k_F": 4}})")), ConfigError);
  CHECK_THROWS_AS(wtrace::config::parse(json::parse(R"({"lambda": {"type": "disk", "radius": -1}})")), ConfigError);
  wtrace::config::SymbolSpec t;
  t.type = "tabulated";
  t.xi = {-1.0, 0.0, 1.0};
  t.values = {0.0, 1.0, 0.0};
  const auto a = wtrace::config::build_symbol(t);
  CHECK(a.at(0.0, 0.5).real() == doctest::Approx(0.5));
  CHECK(a.at(0.0, 2.0).real() == 0.0);
}

TEST_CASE("verify mode on the bundled config exits 0") {
  const Run r = cli("verify " + configs + "/verify.json --out " + (scratch() / "verify").string());
  CHECK(r.status == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("20/20 checks passed") != std::string::npos);
}
