#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = irf::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("irf_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("sample writes one CSV row per step") {
  const auto r = run({"sample", "gaussian:0:1", "--steps", "50", "--seed", "3"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 51);
  CHECK(ls[0] == "step,x1");
  CHECK(r.err.empty());

  const auto m = run({"sample", "mvn:3", "--steps", "10"});
  REQUIRE(m.code == 0);
  CHECK(lines(m.out)[0] == "step,x1,x2,x3");
  CHECK(lines(m.out).size() == 11);

  const auto timed = run({"sample", "gaussian:0:1", "--steps", "50", "--seed", "3", "--timing"});
  CHECK(timed.out == r.out);
  CHECK_FALSE(timed.err.empty());
}

TEST_CASE("decomposed sampler stays in the support") {
  const auto r = run({"sample", "beta:2:2", "--sampler", "decomposed", "--steps", "200"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 201);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const double x = std::stod(ls[i].substr(ls[i].find(',') + 1));
    CHECK((x > 0.0 && x < 1.0));
  }
}

TEST_CASE("usage errors") {
  CHECK(run({"sample", "cauchy:0:1"}).code == 2);
  CHECK(run({"sample", "gaussian:0:1", "--bogus"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"sample", "gaussian:0:1", "--sampler", "gibbs"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("check reports") {
  auto r = run({"check", "gaussian:0:1", "--kind", "stationarity"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["statistic"].get<double>() < j["threshold"].get<double>());

  r = run({"check", "gaussian:0:1", "--kind", "stationarity", "--negative-control"});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.out)["pass"] == false);

  r = run({"check", "beta:2:2", "--kind", "ks", "--steps", "20000"});
  CHECK(r.code == 0);
  r = run({"check", "mvn:4", "--kind", "gradient"});
  CHECK(r.code == 0);

  r = run({"check", "--all", "--kind", "gradient"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["reports"].size() == j["targets"].get<std::size_t>());
  CHECK(j["targets"].get<std::size_t>() >= 9);
}

TEST_CASE("lasso demo writes its outputs quickly") {
  const auto dir = scratch_dir("demo");
  const auto start = std::chrono::steady_clock::now();
  const auto r = run({"lasso-demo", "--reps", "2", "--seed", "4", "--out", dir.string()});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE(r.code == 0);
  CHECK(secs < 30.0);
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "timing.json"));
  CHECK(fs::exists(dir / "replicate_0000.json"));
  CHECK(fs::exists(dir / "replicate_0001.json"));
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["methods"].size() == 3);

  const auto lap = scratch_dir("demo_laplace");
  REQUIRE(run({"lasso-demo", "--reps", "1", "--rand", "laplace", "--out", lap.string()}).code == 0);
  CHECK(nlohmann::json::parse(slurp(lap / "summary.json"))["config"]["rand"] == "laplace");
  CHECK(run({"lasso-demo", "--rand", "cauchy"}).code == 2);
  fs::remove_all(dir);
  fs::remove_all(lap);
}

TEST_CASE("surface grid") {
  const auto r = run({"surface", "--target", "gaussian:0:1", "--x", "-1", "--grid", "11"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 12);
  CHECK(ls[0] == "V,f_minus,f_plus");
  // V = 1 gives no time to move.
  CHECK(ls.back().rfind("1,-1,-1", 0) == 0);
}

TEST_CASE("reruns are byte identical") {
  const std::vector<std::string> args{"sample", "mixture:0.5:0:4:1", "--steps", "500", "--seed", "9"};
  CHECK(run(args).out == run(args).out);
  const auto a = scratch_dir("rerun_a");
  const auto b = scratch_dir("rerun_b");
  REQUIRE(run({"lasso-demo", "--reps", "2", "--seed", "1", "--threads", "1", "--out", a.string()}).code == 0);
  REQUIRE(run({"lasso-demo", "--reps", "2", "--seed", "1", "--threads", "2", "--out", b.string()}).code == 0);
  for (const char* f : {"summary.json", "replicate_0000.json", "replicate_0001.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}
