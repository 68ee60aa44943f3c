#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "wedge/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json report(const fs::path& p) { return json::parse(slurp(p)); }

std::string without_timestamp(std::string text) {
  static const std::regex stamp("\"generated_at\": \"[^\"]*\"");
  return std::regex_replace(text, stamp, "");
}

struct TmpDir {
  fs::path path;
  explicit TmpDir(const std::string& name) : path(fs::path("cli_test_out") / name) {
    fs::remove_all(path);
  }
  ~TmpDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("spectrum subcommand writes the hemisphere report") {
  TmpDir out("spectrum");
  const int rc = wedge::run_cli(
      {"spectrum", "--n", "3", "--beta", "1.5707963", "--out", out.str()});
  REQUIRE(rc == 0);
  const json doc = report(out.path / "spectrum.json");
  CHECK(doc["subcommand"] == "spectrum");
  CHECK(doc["config"]["n"] == 3);
  CHECK(doc["results"]["lambda"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(doc["results"]["gamma"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  const std::string csv = slurp(out.path / "spectrum_phi1.csv");
  CHECK(csv.rfind("theta,phi1,phi1_prime", 0) == 0);
}

TEST_CASE("config file values merge under explicit flags") {
  TmpDir out("config");
  fs::create_directories(out.path);
  const fs::path cfg = out.path / "cfg.json";
  std::ofstream(cfg) << R"({"p": 2.2, "beta": 1.2, "nodes": 1025})";
  const int rc = wedge::run_cli({"profile", "--config", cfg.string(), "--beta",
                                 "1.3", "--out", out.str()});
  REQUIRE(rc == 0);
  const json doc = report(out.path / "profile.json");
  CHECK(doc["config"]["p"].get<double>() == doctest::Approx(2.2));
  CHECK(doc["config"]["beta"].get<double>() == doctest::Approx(1.3));  // flag wins
  CHECK(doc["config"]["nodes"] == 1025);
}

TEST_CASE("configuration failures exit with code 2") {
  TmpDir out("badcfg");
  fs::create_directories(out.path);
  CHECK(wedge::run_cli({"spectrum", "--badflag"}) == 2);
  CHECK(wedge::run_cli({"profile", "--out", out.str()}) == 2);  // missing p
  CHECK(wedge::run_cli({"spectrum", "--config", "/nonexistent.json"}) == 2);

  const fs::path broken = out.path / "broken.json";
  std::ofstream(broken) << "{not json";
  CHECK(wedge::run_cli({"spectrum", "--config", broken.string()}) == 2);

  const fs::path unknown = out.path / "unknown.json";
  std::ofstream(unknown) << R"({"no_such_field": 1})";
  CHECK(wedge::run_cli({"spectrum", "--config", unknown.string()}) == 2);
}

TEST_CASE("solver preconditions exit with code 3") {
  TmpDir out("lowp");
  // hemisphere critical exponent is 2; p below it must fail in the solve phase
  CHECK(wedge::run_cli({"assemble", "--p", "1.5", "--out", out.str()}) == 3);
  CHECK(wedge::run_cli({"profile", "--p", "1.5", "--out", out.str()}) == 3);
}

TEST_CASE("unwritable output path exits with code 4") {
  TmpDir out("io");
  fs::create_directories(out.path);
  const fs::path file = out.path / "blocker";
  std::ofstream(file) << "x";
  const std::string nested = (file / "sub").string();  // directory under a file
  CHECK(wedge::run_cli({"spectrum", "--out", nested}) == 4);
}

TEST_CASE("identical config and seed give byte-identical reports") {
  TmpDir a("det_a"), b("det_b");
  REQUIRE(wedge::run_cli({"heteroclinic", "--p", "2.1", "--seed", "5", "--out",
                          a.str()}) == 0);
  REQUIRE(wedge::run_cli({"heteroclinic", "--p", "2.1", "--seed", "5", "--out",
                          b.str()}) == 0);
  CHECK(without_timestamp(slurp(a.path / "heteroclinic.json")) ==
        without_timestamp(slurp(b.path / "heteroclinic.json")));
  CHECK(slurp(a.path / "heteroclinic_orbit.csv") ==
        slurp(b.path / "heteroclinic_orbit.csv"));
}

TEST_CASE("verification battery passes and records every check") {
  TmpDir out("verify");
  REQUIRE(wedge::run_cli({"verify-all", "--seed", "42", "--out", out.str()}) == 0);
  const json doc = report(out.path / "verify-all.json");
  CHECK(doc["results"]["all_pass"] == true);
  CHECK(doc["results"]["checks"].size() >= 10);
  for (const auto& check : doc["results"]["checks"])
    CHECK(check["pass"] == true);
}
