#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spde_lrt::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::vector<int> only;           // empty: all ten
  std::optional<std::int64_t> m;   // overrides Monte Carlo trial counts (smoke runs)
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
};

inline constexpr int kCriteria = 10;

std::string criterion_name(int id);

CriterionResult run_criterion(int id, const Options& options);

// Runs the selected criteria in order, reporting each one as soon as it finishes.
std::vector<CriterionResult> run_all(const Options& options,
                                     const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_line(const CriterionResult& r);

}  // namespace spde_lrt::acceptance
