#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "report.hpp"
#include "spde_lrt/montecarlo.hpp"

using namespace spde_lrt;
using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "spde-lrt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("spde_lrt_test_" + name);
}

}  // namespace

TEST_CASE("threshold reports the horizon bound") {
  const Outcome r = call({"threshold", "--format", "json"});
  REQUIRE(r.code == cli::kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["result"]["T_b1"]["rounded"] == 818);
  CHECK(j["result"]["M"].get<double>() == 14.0);
  CHECK(j["metadata"]["rng_algorithm"] == kRngAlgorithm);
  CHECK(j["metadata"]["config"]["command"] == "threshold");
}

TEST_CASE("exit codes") {
  CHECK(call({"--help"}).code == cli::kExitOk);
  CHECK(call({}).code == cli::kExitUsage);
  CHECK(call({"threshold", "--no-such-flag"}).code == cli::kExitUsage);
  CHECK(call({"reproduce"}).code == cli::kExitUsage);
  const Outcome bad = call({"type1", "--theta0", "-1"});
  CHECK(bad.code == cli::kExitInvalid);
  CHECK(bad.err.find("theta0") != std::string::npos);
  CHECK(call({"type1", "--N", "40", "--T", "1", "--n", "10", "--m", "10"}).code == cli::kExitInvalid);
  CHECK(call({"reproduce", "--table", "7"}).code == cli::kExitInvalid);
  CHECK(call({"reproduce", "--table", "4", "--bound-only", "--check"}).code == cli::kExitOk);
  // 100 trials are far too few for the tolerance of this cell.
  CHECK(call({"reproduce", "--table", "1", "--columns", "dT=1", "--m", "100", "--seed", "1",
              "--check"})
            .code == cli::kExitCheckFailed);
}

TEST_CASE("config JSON round trip") {
  cli::RunConfig c;
  c.command = "type2";
  c.N = 7;
  c.u0 = {0.5, 0, 0, 0, 0, 0, -1};
  c.dt = 0.01;
  c.seed = 99;
  c.columns = {"T=10", "T=40"};
  c.criteria = {1, 4};
  c.epsilon = 0.25;
  CHECK(cli::config_from_json(cli::to_json(c)) == c);
  CHECK(cli::config_from_json(json::parse(cli::to_json(c).dump())) == c);
  json extra = cli::to_json(c);
  extra["unknown"] = 1;
  CHECK_THROWS(cli::config_from_json(extra));
}

TEST_CASE("replay reproduces a run bit for bit") {
  const auto path = temp_file("replay.json");
  const Outcome first = call({"type1", "--m", "300", "--seed", "5", "--format", "json", "--output",
                              path.string()});
  REQUIRE(first.code == cli::kExitOk);
  std::ifstream in(path);
  const json original = json::parse(in);
  const Outcome again = call({"replay", path.string()});
  REQUIRE(again.code == cli::kExitOk);
  std::ifstream in2(path);
  const json replayed = json::parse(in2);
  CHECK(replayed["metadata"] == original["metadata"]);
  json a = original["result"], b = replayed["result"];
  a.erase("runtime_seconds");
  b.erase("runtime_seconds");
  CHECK(a == b);
  std::filesystem::remove(path);
  CHECK(call({"replay", path.string()}).code == cli::kExitInvalid);
}

TEST_CASE("CSV and JSON carry the same numbers") {
  const std::vector<std::string> base = {"reproduce", "--table", "2", "--bound-only", "--format"};
  auto args = base;
  args.push_back("json");
  const json j = json::parse(call(args).out);
  args.back() = "csv";
  const auto rows = report::parse_csv(call(args).out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].size() == 15);
  const auto& cells = j["result"]["rows"];
  REQUIRE(cells.size() == 4);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CHECK(rows[i + 1][2] == cells[i]["col_key"].get<std::string>());
    CHECK(std::stod(rows[i + 1][4]) == cells[i]["estimate"].get<double>());
  }

  const json e = json::parse(call({"type1", "--m", "200", "--format", "json"}).out);
  const auto erows = report::parse_csv(call({"type1", "--m", "200", "--format", "csv"}).out);
  REQUIRE(erows.size() == 2);
  CHECK(std::stoll(erows[1][3]) == e["result"]["events"].get<long long>());
  CHECK(std::stod(erows[1][2]) == e["result"]["p_hat"].get<double>());
  CHECK(std::stod(erows[1][8]) == e["result"]["mean_log_lr"].get<double>());
}

TEST_CASE("seed resolution") {
  ::setenv(kSeedEnvVar, "777", 1);
  CHECK(json::parse(call({"threshold", "--format", "json"}).out)["metadata"]["seed"] == 777);
  CHECK(json::parse(call({"type1", "--m", "10", "--seed", "3", "--format", "json"}).out)["metadata"]["seed"] == 3);
  ::setenv(kSeedEnvVar, "banana", 1);
  CHECK(call({"threshold"}).code == cli::kExitInvalid);
  ::unsetenv(kSeedEnvVar);
  CHECK(json::parse(call({"threshold", "--format", "json"}).out)["metadata"]["seed"] == kDefaultSeed);
}

TEST_CASE("acceptance subset through the check command") {
  const Outcome r = call({"check", "--only", "1,2,3"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("PASS criterion  1") != std::string::npos);
  CHECK(r.out.find("PASS criterion  3") != std::string::npos);
  CHECK(r.out.find("criterion  4") == std::string::npos);
}

TEST_CASE("installed binary runs") {
  const char* exe = std::getenv("SPDE_LRT_CLI");
  if (!exe) return;
  const std::string cmd = std::string(exe) + " threshold > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
