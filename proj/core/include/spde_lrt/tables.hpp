#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spde_lrt/montecarlo.hpp"

namespace spde_lrt {

// Published value with the number of significant figures it was printed with.
struct PrintedValue {
  double value = 0.0;
  int sig_figs = 0;
};

struct TableCell {
  std::string row_key;
  std::string col_key;
  std::optional<PrintedValue> published;
  double estimate = 0.0;
  std::optional<ErrorEstimate> mc;  // set for Monte Carlo cells
  std::int64_t steps = 0;           // n; 0 for closed-form cells
  std::uint64_t seed = 0;

  // Acceptance rule. Monte Carlo cells pass when |estimate - published| <= max(floor, k * stderr)
  // and, if present, estimate <= upper_limit. Closed-form cells with tol_sig_figs pass
  // when the estimate rounds to the printed value.
  bool checked = false;
  double tol_floor = 0.0;
  double tol_stderr_mult = 0.0;
  bool tol_sig_figs = false;
  std::optional<double> upper_limit;

  std::optional<double> abs_diff() const;
  double tolerance() const;
  bool within() const;
};

struct TableResult {
  int id = 0;
  std::string title;
  std::vector<std::string> row_keys;
  std::vector<std::string> col_keys;
  std::vector<TableCell> cells;
  std::vector<std::string> notes;
  std::int64_t m = 0;
  std::uint64_t base_seed = 0;

  const TableCell* find(std::string_view row, std::string_view col) const;
  bool all_checked_within() const;
};

struct TableOverrides {
  std::optional<std::int64_t> m;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  bool bound_only = false;            // closed-form rows only
  std::optional<double> max_step;     // caps dt for the auto-grid presets
  std::optional<Route> route;
  std::vector<std::string> columns;   // empty: all columns
};

inline constexpr std::int64_t kPresetTrials = 20000;
inline constexpr double kPresetStep = 0.02;

// Seed for one column of a table preset, so every cell can be rerun on its own.
std::uint64_t cell_seed(std::uint64_t base_seed, int table_id, std::size_t column);

// Rounds x to the given significant figures.
double round_sig(double x, int sig_figs);

TableResult reproduce_table(int table_id, const TableOverrides& overrides = {});

}  // namespace spde_lrt
