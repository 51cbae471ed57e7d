#include "report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "spde_lrt/error.hpp"

namespace spde_lrt::report {

Format parse_format(std::string_view s) {
  if (s == "text") return Format::text;
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw DomainError("unknown format '" + std::string(s) + "' (expected text|csv|json)");
}

std::string_view to_string(Format f) {
  switch (f) {
    case Format::text: return "text";
    case Format::csv: return "csv";
    case Format::json: return "json";
  }
  return "text";
}

std::string exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string sig4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

namespace {

std::string opt_number(bool present, double v) { return present ? exact(v) : std::string(); }

}  // namespace

std::vector<std::string> csv_rows(const TableResult& t) {
  std::vector<std::string> rows;
  for (const TableCell& c : t.cells) {
    std::ostringstream os;
    const bool mc = c.mc.has_value();
    os << t.id << ',' << c.row_key << ',' << c.col_key << ','
       << opt_number(c.published.has_value(), c.published ? c.published->value : 0.0) << ','
       << exact(c.estimate) << ',' << opt_number(mc, mc ? c.mc->std_error : 0.0) << ','
       << opt_number(mc, mc ? c.mc->ci_lo : 0.0) << ',' << opt_number(mc, mc ? c.mc->ci_hi : 0.0)
       << ',' << (mc ? std::to_string(c.mc->m) : "") << ','
       << (mc ? std::to_string(c.steps) : "") << ',' << (mc ? std::to_string(c.seed) : "") << ','
       << (c.abs_diff() ? exact(*c.abs_diff()) : "") << ','
       << (c.checked && !c.tol_sig_figs ? exact(c.tolerance()) : "") << ','
       << (c.checked ? "1" : "0") << ',' << (c.checked ? (c.within() ? "1" : "0") : "");
    rows.push_back(os.str());
  }
  return rows;
}

nlohmann::json to_json(const TableResult& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const TableCell& c : t.cells) {
    nlohmann::json r;
    r["table"] = t.id;
    r["row_key"] = c.row_key;
    r["col_key"] = c.col_key;
    r["paper_value"] = c.published ? nlohmann::json(c.published->value) : nlohmann::json();
    r["estimate"] = c.estimate;
    if (c.mc) {
      r["stderr"] = c.mc->std_error;
      r["ci_lo"] = c.mc->ci_lo;
      r["ci_hi"] = c.mc->ci_hi;
      r["m"] = c.mc->m;
      r["n"] = c.steps;
      r["seed"] = c.seed;
      r["events"] = c.mc->events;
      r["runtime_seconds"] = c.mc->runtime_seconds;
    } else {
      for (const char* k : {"stderr", "ci_lo", "ci_hi", "m", "n", "seed"}) r[k] = nullptr;
    }
    r["abs_diff"] = c.abs_diff() ? nlohmann::json(*c.abs_diff()) : nlohmann::json();
    r["tolerance"] = c.checked && !c.tol_sig_figs ? nlohmann::json(c.tolerance()) : nlohmann::json();
    r["checked"] = c.checked;
    r["within"] = c.checked ? nlohmann::json(c.within()) : nlohmann::json();
    rows.push_back(std::move(r));
  }
  nlohmann::json j;
  j["table"] = t.id;
  j["title"] = t.title;
  j["notes"] = t.notes;
  j["m"] = t.m;
  j["base_seed"] = t.base_seed;
  j["rows"] = std::move(rows);
  return j;
}

std::string to_text(const TableResult& t) {
  std::ostringstream os;
  os << "Table " << t.id << ": " << t.title << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %-11s %-10s %-10s %-10s %-10s %s\n", "row", "col", "printed",
                "estimate", "stderr", "|diff|", "check");
  os << line;
  for (const TableCell& c : t.cells) {
    const std::string printed = c.published ? sig4(c.published->value) : "-";
    const std::string se = c.mc ? sig4(c.mc->std_error) : "-";
    const std::string diff = c.abs_diff() ? sig4(*c.abs_diff()) : "-";
    const char* verdict = !c.checked ? "" : (c.within() ? "ok" : "FAIL");
    std::snprintf(line, sizeof line, "%-8s %-11s %-10s %-10s %-10s %-10s %s\n", c.row_key.c_str(),
                  c.col_key.c_str(), printed.c_str(), sig4(c.estimate).c_str(), se.c_str(),
                  diff.c_str(), verdict);
    os << line;
  }
  for (const std::string& n : t.notes) os << "note: " << n << '\n';
  return os.str();
}

nlohmann::json to_json(const ErrorEstimate& e) {
  return {{"test", std::string(to_string(e.test))},
          {"error", std::string(to_string(e.error))},
          {"p_hat", e.p_hat},
          {"events", e.events},
          {"m", e.m},
          {"stderr", e.std_error},
          {"ci_lo", e.ci_lo},
          {"ci_hi", e.ci_hi},
          {"mean_log_lr", e.mean_log_lr},
          {"n", e.steps},
          {"seed", e.seed},
          {"rng_algorithm", e.rng_algorithm},
          {"runtime_seconds", e.runtime_seconds}};
}

std::string csv_header_estimate() {
  return "test,error,p_hat,events,m,stderr,ci_lo,ci_hi,mean_log_lr,n,seed,rng_algorithm,"
         "runtime_seconds";
}

std::string csv_row(const ErrorEstimate& e) {
  std::ostringstream os;
  os << to_string(e.test) << ',' << to_string(e.error) << ',' << exact(e.p_hat) << ',' << e.events
     << ',' << e.m << ',' << exact(e.std_error) << ',' << exact(e.ci_lo) << ',' << exact(e.ci_hi)
     << ',' << exact(e.mean_log_lr) << ',' << e.steps << ',' << e.seed << ',' << e.rng_algorithm
     << ',' << exact(e.runtime_seconds);
  return os.str();
}

namespace {

void flatten(const nlohmann::json& j, const std::string& prefix,
             std::vector<std::pair<std::string, const nlohmann::json*>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else {
    out.emplace_back(prefix, &j);
  }
}

std::string scalar(const nlohmann::json& v, bool text) {
  if (v.is_number_float()) return text ? sig4(v.get<double>()) : exact(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

std::string csv_scalars(const nlohmann::json& values) {
  std::vector<std::pair<std::string, const nlohmann::json*>> flat;
  flatten(values, "", flat);
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [k, v] : flat) os << k << ',' << scalar(*v, false) << '\n';
  return os.str();
}

std::string text_scalars(const nlohmann::json& values) {
  std::vector<std::pair<std::string, const nlohmann::json*>> flat;
  flatten(values, "", flat);
  std::ostringstream os;
  for (const auto& [k, v] : flat) os << k << ": " << scalar(*v, true) << '\n';
  return os.str();
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace spde_lrt::report
