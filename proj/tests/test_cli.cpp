#include "conekit/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace conekit::cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "conekit_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_ball3() {
  const auto path = scratch("ball3.json");
  std::ofstream(path) << R"({"kind": "Ball", "dim": 3, "center": [0, 0, 0], "radius": 1})";
  return path.string();
}

}  // namespace

TEST_CASE("bootstrap subcommand reports the verdict") {
  const Run r = run_cli({"bootstrap", "--n", "3", "--s", "1", "--a", "0", "--p", "2", "--k", "50"});
  CHECK(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["verdict"] == "DivergesPlus");
  CHECK(j["sequence"].size() == 51);
}

TEST_CASE("kernel-verify on the ball passes") {
  const Run r = run_cli({"kernel-verify", "--which", "H3", "--domain", write_ball3(), "--samples", "1000", "--seed", "7"});
  CHECK(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["min_margin"].get<double>() >= -1e-12);
}

TEST_CASE("solve writes a CSV profile and a JSON report") {
  const auto out = scratch("solve_out");
  std::filesystem::remove_all(out);
  const Run r = run_cli({"solve", "--domain", write_ball3(), "--p", "2", "--t", "0", "--out", out.string()});
  CHECK(r.code == kExitOk);
  std::ifstream jf(out / "solve.json");
  const json j = json::parse(jf);
  CHECK(j["sup_norm"].get<double>() >= 1.5);
  CHECK(j["converged"] == true);
  std::ifstream cf(out / "solve.csv");
  std::string header;
  std::getline(cf, header);
  CHECK(header == "r,u");
}

TEST_CASE("identical runs give byte-identical reports") {
  const std::vector<std::string> args = {"kernel-verify", "--which", "H3", "--domain", write_ball3(), "--seed", "11"};
  CHECK(run_cli(args).out == run_cli(args).out);
  const std::vector<std::string> lam = {"mss-lambda0", "--profile", "gaussian", "--motion", "shrink", "--seed", "3"};
  CHECK(run_cli(lam).out == run_cli(lam).out);
}

TEST_CASE("config file with flag overrides") {
  const auto cfg = scratch("boot.json");
  std::ofstream(cfg) << R"({"command": "bootstrap", "params": {"n": 3, "s": 1, "a": 0, "p": 7}, "k": 3})";
  const Run a = run_cli({"--config", cfg.string()});
  CHECK(a.code == kExitOk);
  CHECK(json::parse(a.out)["verdict"] == "DivergesMinus");
  const Run b = run_cli({"--config", cfg.string(), "--p", "2"});
  CHECK(json::parse(b.out)["verdict"] == "DivergesPlus");
}

TEST_CASE("CSV output") {
  const Run r = run_cli({"bootstrap", "--n", "3", "--s", "1", "--p", "2", "--k", "2", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "k,mu\n0,-0.5\n1,1\n2,4\n");
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"bootstrap", "--n", "three"}).code == kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == kExitUsage);
  CHECK(run_cli({"bootstrap", "--bogus", "1"}).code == kExitUsage);
  CHECK(run_cli({}).code == kExitUsage);
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << "{ not json";
  CHECK(run_cli({"--config", bad.string()}).code == kExitUsage);
  CHECK(run_cli({"kernel-eval", "--domain", "{\"kind\": \"Ball\"}", "--x", "0,0", "--y", "0.5,0"}).code == kExitUsage);
  // Iteration cap reached without convergence: verification failure.
  CHECK(run_cli({"solve", "--domain", write_ball3(), "--p", "2", "--max-iters", "2"}).code == kExitVerificationFailure);
  // No solution exists for a large source term: the iterates blow up.
  CHECK(run_cli({"solve", "--domain", write_ball3(), "--p", "2", "--t", "50", "--mode", "Plain"}).code == kExitDivergence);
}

TEST_CASE("kernel-eval and blowup subcommands") {
  const Run k = run_cli({"kernel-eval", "--domain", write_ball3(), "--x", "0,0,0", "--y", "0.5,0,0"});
  REQUIRE(k.code == kExitOk);
  CHECK(json::parse(k.out)["value"].get<double>() == doctest::Approx((1 / 0.5 - 1) / (4 * 3.141592653589793)));
  const Run b = run_cli({"blowup", "--domain",
                         R"({"kind": "Polygon2D", "dim": 2, "vertices": [[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]})",
                         "--x0", "1,1", "--rho", "1e-1,1e-2"});
  REQUIRE(b.code == kExitOk);
  CHECK(json::parse(b.out)["cone_angle"].get<double>() == doctest::Approx(1.5 * 3.141592653589793));
}
