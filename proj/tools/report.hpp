#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "spde_lrt/montecarlo.hpp"
#include "spde_lrt/tables.hpp"

namespace spde_lrt::report {

enum class Format { text, csv, json };

Format parse_format(std::string_view s);
std::string_view to_string(Format f);

// Shortest decimal string that reads back to the same double.
std::string exact(double v);

// Four significant digits, as in the published tables.
std::string sig4(double v);

// One row per table cell. The leading columns are
// table,row_key,col_key,paper_value,estimate,stderr,ci_lo,ci_hi,m,n,seed.
inline constexpr std::string_view kCsvHeader =
    "table,row_key,col_key,paper_value,estimate,stderr,ci_lo,ci_hi,m,n,seed,abs_diff,tolerance,"
    "checked,within";

std::vector<std::string> csv_rows(const TableResult& t);
nlohmann::json to_json(const TableResult& t);
std::string to_text(const TableResult& t);

nlohmann::json to_json(const ErrorEstimate& e);
std::string csv_header_estimate();
std::string csv_row(const ErrorEstimate& e);

// key,value lines for scalar results; `#`-prefixed lines carry metadata.
std::string csv_scalars(const nlohmann::json& values);
std::string text_scalars(const nlohmann::json& values);

// Minimal CSV reader for the files written above (no quoting needed).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace spde_lrt::report
