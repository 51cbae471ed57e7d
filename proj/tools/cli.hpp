#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace spde_lrt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCheckFailed = 3;

// Everything needed to rerun a command. The JSON echo of a run re-parses to an
// equal RunConfig, and the seed it carries is the one actually used.
struct RunConfig {
  std::string command;

  double beta = 1.0;
  double gamma = 0.0;
  double sigma = 1.0;
  int d = 1;
  std::int64_t N = 3;
  std::string basis = "power";
  std::vector<double> eigenvalues;
  std::vector<double> u0;

  double theta0 = 0.1;
  double theta1 = 0.2;
  double alpha = 0.05;
  double rho = 0.1;

  double T = 100.0;
  std::optional<std::int64_t> n;
  std::optional<double> dt;

  std::string test = "rt0";
  std::string route = "ito";
  std::int64_t m = 20000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;

  std::string regime = "time";
  int hypothesis = 0;
  std::optional<double> epsilon;
  std::optional<double> level;

  int table = 0;
  bool bound_only = false;
  bool check = false;
  std::vector<std::string> columns;
  std::vector<int> criteria;

  std::string format = "text";
  std::string output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

// Parses argv, runs the command, writes data to `out` (or the --output file) and
// diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spde_lrt::cli
