#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "glvortex/commands.hpp"
#include "glvortex/errors.hpp"
#include "glvortex/io.hpp"

using namespace glvortex;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("glvortex_cli_" + std::to_string(getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Result {
  int code;
  std::string err;
};

Result run(const std::string& args) {
  const char* cli = std::getenv("GLVORTEX_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "GLVORTEX_CLI not set");
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = "cd " + scratch().string() + " && " + cli + " " + args + " > /dev/null 2> " + err.string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("n rules") {
  const DomainSpec d = DomainSpec::disk();
  CHECK(n_from_rule("max", d, 25.0) == 10);
  CHECK(n_from_rule("max", d, 200.0) == 91);
  CHECK(n_from_rule("fixed:3", d, 25.0) == 3);
  CHECK(n_from_rule("fraction:0.5", d, 200.0) == 45);
  CHECK(n_from_rule("fraction:0.01", d, 25.0) == 1);
  CHECK_THROWS_AS(n_from_rule("most", d, 25.0), ConfigError);
  CHECK_THROWS_AS(n_from_rule("fixed:x", d, 25.0), ConfigError);
}

TEST_CASE("random configurations are reproducible and separated") {
  const DomainSpec d = DomainSpec::disk();
  const auto a = random_configs(d, 6, 4, 0.1, 7), b = random_configs(d, 6, 4, 0.1, 7);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(io::config_hash(a[i]) == io::config_hash(b[i]));
    CHECK(rho(d, a[i]) >= 0.1);
    CHECK(a[i].N() >= 1);
    CHECK(a[i].N() <= 4);
  }
  for (const auto& c : random_configs(d, 3, 3, 0.1, 2, true)) CHECK(c.N() == 3);
  CHECK(io::config_hash(random_configs(d, 1, 4, 0.1, 8)[0]) != io::config_hash(a[0]));
}

TEST_CASE("manifest json") {
  RunManifest m;
  m.command = "obstacle";
  m.domain = DomainSpec::ellipse(1.5, 1.0);
  m.lambda = {0.5};
  m.outputs = {"obstacle.csv"};
  const auto j = nlohmann::json::parse(manifest_json(m));
  CHECK(j["command"] == "obstacle");
  CHECK(j["version"] == kVersion);
  CHECK(j["domain"]["text"] == "ellipse:1.5,1");
  CHECK(j["lambda"][0] == 0.5);
}

TEST_CASE("obstacle below the lambda floor exits 2 and writes nothing") {
  const fs::path out = scratch() / "floor";
  const Result r = run("obstacle --resolution 32 --lambda 0.3 --out " + out.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("(|Omega| - hex^(-1/4))^(-1)") != std::string::npos);
  CHECK_FALSE(fs::exists(out / "obstacle.csv"));
}

TEST_CASE("obstacle run writes csv, svg and manifest") {
  const fs::path out = scratch() / "obstacle";
  REQUIRE(run("obstacle --resolution 32 --lambda 0.6,0.8 --hex-N 200:20 --out " + out.string()).code == 0);
  auto t = io::read_csv(out / "obstacle.csv");
  REQUIRE(t["lambda"].size() == 3);
  CHECK(slurp(out / "obstacle.csv")
            .starts_with("lambda,hex,m_lambda,f_residual,min_zeta,coincidence_area,dist_sigma_boundary,iters"));
  CHECK(std::stod(t["lambda"][2]) == doctest::Approx(200.0 / (2.0 * std::numbers::pi * 20)));
  CHECK(std::stod(t["m_lambda"][0]) < std::stod(t["m_lambda"][1]));
  const auto j = nlohmann::json::parse(slurp(out / "manifest.json"));
  for (const auto& f : j["outputs"]) CHECK(fs::exists(out / f.get<std::string>()));
  CHECK(j["lambda"].size() == 3);
  for (const auto& e : fs::directory_iterator(out)) CHECK(e.path().string().find(".tmp") == std::string::npos);
}

TEST_CASE("config file is read and flags override it") {
  const fs::path cfg = scratch() / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# obstacle sweep\nresolution = 32\nlambda = 0.5\nout = from_file\n";
  }
  REQUIRE(run("obstacle --config " + cfg.string() + " --lambda 0.7").code == 0);
  auto t = io::read_csv(scratch() / "from_file" / "obstacle.csv");
  REQUIRE(t["lambda"].size() == 1);
  CHECK(std::stod(t["lambda"][0]) == doctest::Approx(0.7));
  {
    std::ofstream f(cfg, std::ios::app);
    f << "colour = blue\n";
  }
  CHECK(run("obstacle --config " + cfg.string()).code == 2);
}

TEST_CASE("bad input exits 2") {
  CHECK(run("obstacle --domain ellipse:1 --lambda 0.5 --out bad").code == 2);
  CHECK(run("minimize --hex 25 --n-rule fixed:40 --resolution 32 --out bad").code == 2);
  CHECK(run("minimize --hex 25 --n-rule often --out bad").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("identities are deterministic and converge") {
  const fs::path a = scratch() / "id_a", b = scratch() / "id_b";
  const std::string args = "identities --resolutions 64,128 --count 3 --max-N 3 --seed 5 --out ";
  REQUIRE(run(args + a.string()).code == 0);
  REQUIRE(run(args + b.string() + " --jobs 2").code == 0);
  CHECK(slurp(a / "identities.csv") == slurp(b / "identities.csv"));
  CHECK(slurp(a / "rates.csv") == slurp(b / "rates.csv"));
  auto rates = io::read_csv(a / "rates.csv");
  REQUIRE(rates["rate_B1"].size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::stod(rates["rate_B1"][i]) >= 1.5);
    CHECK(std::stod(rates["rate_WH"][i]) >= 1.5);
  }
}

TEST_CASE("minimize sweep") {
  const fs::path out = scratch() / "min";
  REQUIRE(run("minimize --resolution 48 --hex 25,50 --n-rule fixed:2 --starts 2 --out " + out.string()).code == 0);
  auto t = io::read_csv(out / "minimize.csv");
  REQUIRE(t["hex"].size() == 2);
  CHECK(t["N"][1] == "2");
  CHECK(std::stod(t["min_separation"][0]) > 0.0);
  CHECK(std::isfinite(std::stod(t["c0_hat"][0])));
  CHECK(fs::exists(out / "config_hex25.csv"));
  CHECK(io::read_config(out / "config_hex50.csv").N() == 2);
}

TEST_CASE("cleanup") { fs::remove_all(scratch()); }
