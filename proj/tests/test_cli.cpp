#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tfloc/cli.hpp"

using namespace tfloc;
namespace fs = std::filesystem;

namespace {
struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int rc = cli::run(args, o, e);
  return {rc, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tfloc_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string l;
  std::getline(in, l);
  return l;
}
}  // namespace

TEST_CASE("weight JSON round trip") {
  const nlohmann::json spec = {{"family", "subexponential"}, {"params", {1.0, 0.5}}, {"exponent", -1.0}};
  const RadialWeight w = cli::weight_from_json(spec);
  CHECK(w(4.0, 0.0) == doctest::Approx(std::exp(-2.0)));
  const RadialWeight back = cli::weight_from_json(nlohmann::json::parse(cli::weight_to_json(w).dump()));
  CHECK(back(1.0, 2.0) == doctest::Approx(w(1.0, 2.0)));
  const nlohmann::json prod = {{"family", "product"}, {"dimension", 2}, {"factors", {"poly:1", "loglin:1"}}};
  CHECK(cli::weight_from_json(prod).dim() == 2);
  CHECK_THROWS(cli::weight_from_json(nlohmann::json{{"family", "poly"}, {"colour", 1}}));
}

TEST_CASE("tau export") {
  const fs::path dir = scratch("tau");
  const Run r = run({"tau", "--weight", "subexp:1,0.5", "--N", "20", "--out", dir.string()});
  CHECK(r.code == cli::kPass);
  CHECK(first_line(dir / "tau.csv") == "alpha,s,tau,est_error");
  std::ifstream js(dir / "tau.json");
  const auto j = nlohmann::json::parse(js);
  CHECK(j["version"] == "0.1.0");
  CHECK(j["config"]["N"] == 20);
  CHECK(j["pass"] == true);
}

TEST_CASE("config file with flag overrides") {
  const fs::path dir = scratch("cfg");
  fs::create_directories(dir);
  {
    std::ofstream c(dir / "c.json");
    c << R"({"N": 50, "weights": ["loglin:1"], "s": 2})";
  }
  const Run r = run({"tau", "--config", (dir / "c.json").string(), "--N", "7", "--out", (dir / "o").string()});
  CHECK(r.code == cli::kPass);
  std::ifstream js(dir / "o" / "tau.json");
  const auto j = nlohmann::json::parse(js);
  CHECK(j["config"]["N"] == 7);
  CHECK(j["config"]["s"] == 2.0);
  CHECK(j["config"]["weights"][0]["family"] == "loglin");
}

TEST_CASE("configuration errors exit with 2") {
  const fs::path dir = scratch("bad");
  fs::create_directories(dir);
  {
    std::ofstream c(dir / "c.json");
    c << R"({"N": 5, "unexpected": true})";
  }
  CHECK(run({"tau", "--config", (dir / "c.json").string()}).code == cli::kConfigError);
  CHECK(run({"tau", "--weight", "nosuch:1"}).code == cli::kConfigError);
  CHECK(run({"tau", "--tol", "-1"}).code == cli::kConfigError);
  CHECK(run({"frobnicate"}).code == cli::kConfigError);
  CHECK(run({}).code == cli::kConfigError);
  const Run refused = run({"lift", "--weight", "exp:1", "--out", (dir / "o").string()});
  CHECK(refused.code == cli::kConfigError);
  CHECK(refused.err.find("GRS") != std::string::npos);
}

TEST_CASE("invariant failures exit with 1 and still report") {
  const fs::path dir = scratch("fail");
  // rho_n = (n+2)^2 / (1 + 2(n+1) + (n+1)(n+2)): the sup moves by 2.9% from N = 1 to N = 2
  const Run bad = run({"iso", "--weight", "quadratic:3.141592653589793", "--N", "2", "--out", dir.string()});
  CHECK(bad.code == cli::kInvariantFailure);
  std::ifstream js(dir / "iso.json");
  const auto j = nlohmann::json::parse(js);
  CHECK(j["pass"] == false);
  CHECK(j["results"]["reports"][0]["refinement"].size() == 2);
}
