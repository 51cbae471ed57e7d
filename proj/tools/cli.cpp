#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "report.hpp"
#include "spde_lrt/error.hpp"
#include "spde_lrt/montecarlo.hpp"
#include "spde_lrt/sld.hpp"
#include "spde_lrt/tables.hpp"
#include "spde_lrt/thresholds.hpp"

namespace spde_lrt::cli {

using nlohmann::json;

namespace {

constexpr const char* kProgram = "spde-lrt";
constexpr const char* kVersion = "0.1.0";

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json();
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) it->get_to(out);
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    out.reset();
  } else {
    out = it->get<T>();
  }
}

std::uint64_t resolve_seed(const RunConfig& c) {
  if (c.seed) return *c.seed;
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  std::uint64_t v = 0;
  const std::string_view s(env);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw DomainError(std::string(kSeedEnvVar) + " must be an unsigned 64-bit integer, got '" +
                      env + "'");
  }
  return v;
}

ModelParams make_model(const RunConfig& c) {
  if (c.N < 1) throw DomainError("N must be at least 1");
  const Basis basis = parse_basis(c.basis);
  const EigenvalueSource src = basis == Basis::power ? EigenvalueSource::power_law()
                                                     : EigenvalueSource::explicit_list(c.eigenvalues);
  return build_model(c.beta, c.gamma, c.sigma, c.d, static_cast<std::size_t>(c.N), src, c.u0);
}

TimeGrid make_grid(const RunConfig& c, const ModelParams& model, const Hypotheses& hyp) {
  if (c.n) return TimeGrid::make(c.T, *c.n);
  if (c.dt) return TimeGrid::with_max_step(c.T, *c.dt);
  return stable_grid(model, hyp, c.T, kPresetStep);
}

json metadata(const RunConfig& c) {
  return {{"program", kProgram},
          {"version", kVersion},
          {"rng_algorithm", std::string(kRngAlgorithm)},
          {"seed", opt(c.seed)},
          {"config", to_json(c)}};
}

struct Output {
  report::Format format;
  std::ostream& out;
};

// Scalar results in the requested format, with the metadata echo.
void emit_scalars(const Output& o, const RunConfig& c, const json& result) {
  switch (o.format) {
    case report::Format::json:
      o.out << json{{"metadata", metadata(c)}, {"result", result}}.dump(2) << '\n';
      break;
    case report::Format::csv:
      o.out << "# " << metadata(c).dump() << '\n' << report::csv_scalars(result);
      break;
    case report::Format::text:
      o.out << report::text_scalars(result) << "# seed " << (c.seed ? std::to_string(*c.seed) : "-")
            << ", rng " << kRngAlgorithm << '\n';
      break;
  }
}

json bound_json(const HorizonBound& b) {
  return {{"exact", b.exact}, {"rounded", b.rounded}, {"terms", b.terms}};
}

json modes_json(const ModesCondition& m) {
  return {{"M", m.weight},
          {"M_required", m.rhs_weight},
          {"ratio", m.ratio},
          {"ratio_required", m.rhs_ratio},
          {"satisfied", m.satisfied},
          {"diagnostic", m.diagnostic}};
}

int cmd_threshold(const RunConfig& c, const Output& o) {
  const ModelParams model = make_model(c);
  const Hypotheses hyp = Hypotheses::make(c.theta0, c.theta1);
  const TestLevel lv = TestLevel::make(c.alpha, c.rho);
  const CalibratedLevel eta = time_level(lv.alpha, c.T, model, hyp);
  const CalibratedLevel zeta = mode_level(lv.alpha, c.T, model, hyp);
  const HorizonRequirement req =
      horizon_requirement(lv.alpha, lv.rho, model.modes(), model.spectral_weight(), hyp);
  const SharpThreshold sharp = sharp_threshold(lv.alpha, c.T, model, hyp);
  const Type2Bound t2 = type2_bound(c.T, model.spectral_weight(), hyp, lv.rho);
  json r;
  r["M"] = model.spectral_weight();
  r["eta_star"] = eta.level;
  r["delta_eta"] = eta.delta;
  r["zeta_star"] = zeta.level;
  r["delta_zeta"] = zeta.delta;
  r["T_b1"] = bound_json(req.type1);
  r["T_b2"] = bound_json(req.type2);
  r["modes_type1"] = modes_json(modes_condition(lv.alpha, lv.rho, c.T, model, hyp, ErrorKind::type1));
  r["modes_type2"] = modes_json(modes_condition(lv.alpha, lv.rho, c.T, model, hyp, ErrorKind::type2));
  r["log_c_sharp"] = sharp.log_c_sharp;
  r["sharp_statistic_threshold"] = sharp.statistic_threshold;
  r["type2_bound"] = t2.bound;
  r["type2_exponential"] = t2.exponential;
  emit_scalars(o, c, r);
  return kExitOk;
}

int cmd_ldp(const RunConfig& c, const Output& o) {
  const ModelParams model = make_model(c);
  const Hypotheses hyp = Hypotheses::make(c.theta0, c.theta1);
  const Regime regime = c.regime == "time" ? Regime::time
                        : c.regime == "mode"
                            ? Regime::mode
                            : throw DomainError("regime must be time or mode");
  const int j = c.hypothesis;
  if (j != 0 && j != 1) throw DomainError("hypothesis must be 0 or 1");
  if (!(c.T > 0.0)) throw DomainError("horizon T must be positive");
  const double weight = regime == Regime::time ? model.spectral_weight() : c.T;
  const LevelInterval iv = admissible_levels(hyp, weight);

  json r;
  r["regime"] = std::string(to_string(regime));
  r["hypothesis"] = j;
  r["level_interval"] = {{"lo", iv.lo}, {"hi", iv.hi}};

  double level = 0.0;
  if (c.level) {
    level = *c.level;
  } else {
    const TestLevel lv = TestLevel::make(c.alpha, c.rho);
    level = regime == Regime::time ? time_level(lv.alpha, c.T, model, hyp).level
                                   : mode_level(lv.alpha, c.T, model, hyp).level;
  }
  const TiltPoint tilt = tilt_epsilon(level, j, hyp, weight);
  r["level"] = level;
  r["tilt_epsilon"] = tilt.epsilon;
  r["rate"] = rate_function(level, j, hyp, weight);
  r["log_A"] = log_a_factor(level, j, hyp, model, c.T, regime);
  r["A"] = a_factor(level, j, hyp, model, c.T, regime);

  const double eps = c.epsilon.value_or(tilt.epsilon);
  const GfComponents g = gf_components(eps, j, hyp);
  r["epsilon"] = eps;
  r["L"] = g.L;
  r["D"] = g.D;
  r["H"] = g.H;
  r["R"] = residual_R(eps, j, hyp, model, c.T);
  r["dL_deps"] = gf_leading_derivative(eps, j, hyp);
  r["mgf_exponent"] = mgf_exponent(eps, j, hyp, model, c.T, regime);
  emit_scalars(o, c, r);
  return kExitOk;
}

int cmd_estimate(const RunConfig& c, const Output& o, ErrorKind kind) {
  ExperimentSpec spec;
  spec.model = make_model(c);
  spec.hyp = Hypotheses::make(c.theta0, c.theta1);
  spec.level = TestLevel::make(c.alpha, c.rho);
  if (c.m < 1) throw DomainError("trial count m must be at least 1");
  spec.grid = make_grid(c, spec.model, spec.hyp);
  spec.test = parse_test_kind(c.test);
  spec.error = kind;
  spec.route = parse_route(c.route);
  spec.m = c.m;
  spec.base_seed = *c.seed;
  spec.workers = c.workers;
  const ErrorEstimate e = estimate_error(spec);
  const DecisionLevels lv = decision_levels(spec.test, spec.level.alpha, spec.model, spec.grid, spec.hyp);

  json r = report::to_json(e);
  r["T"] = spec.grid.horizon();
  r["dt"] = spec.grid.dt();
  r["route"] = std::string(to_string(spec.route));
  r["level"] = lv.calibrated.level;
  r["delta"] = lv.calibrated.delta;
  r["log_c_sharp"] = lv.sharp.log_c_sharp;
  if (o.format == report::Format::csv) {
    o.out << "# " << metadata(c).dump() << '\n'
          << report::csv_header_estimate() << '\n'
          << report::csv_row(e) << '\n';
  } else {
    emit_scalars(o, c, r);
  }
  return kExitOk;
}

int cmd_reproduce(const RunConfig& c, const Output& o, std::ostream& err) {
  TableOverrides ov;
  ov.m = c.m;
  ov.seed = c.seed;
  ov.workers = c.workers;
  ov.bound_only = c.bound_only;
  ov.max_step = c.dt;
  ov.columns = c.columns;
  const TableResult t = reproduce_table(c.table, ov);
  switch (o.format) {
    case report::Format::json:
      o.out << json{{"metadata", metadata(c)}, {"result", report::to_json(t)}}.dump(2) << '\n';
      break;
    case report::Format::csv:
      o.out << "# " << metadata(c).dump() << '\n' << report::kCsvHeader << '\n';
      for (const std::string& row : report::csv_rows(t)) o.out << row << '\n';
      break;
    case report::Format::text:
      o.out << report::to_text(t) << "# seed " << t.base_seed << ", m " << t.m << ", rng "
            << kRngAlgorithm << '\n';
      break;
  }
  if (c.check && !t.all_checked_within()) {
    err << "check failed: at least one acceptance cell is outside its tolerance\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_check(const RunConfig& c, const Output& o) {
  acceptance::Options opt;
  opt.only = c.criteria;
  opt.seed = c.seed;
  opt.workers = c.workers;
  if (c.m != RunConfig{}.m) opt.m = c.m;
  json results = json::array();
  const auto all = acceptance::run_all(opt, [&](const acceptance::CriterionResult& r) {
    if (o.format == report::Format::text) o.out << acceptance::format_line(r) << std::endl;
    results.push_back({{"id", r.id},
                       {"name", r.name},
                       {"passed", r.passed},
                       {"detail", r.detail},
                       {"seconds", r.seconds}});
  });
  if (o.format == report::Format::json) {
    o.out << json{{"metadata", metadata(c)}, {"result", results}}.dump(2) << '\n';
  } else if (o.format == report::Format::csv) {
    o.out << "# " << metadata(c).dump() << "\nid,name,passed,seconds\n";
    for (const auto& r : all) {
      o.out << r.id << ',' << r.name << ',' << (r.passed ? 1 : 0) << ',' << report::exact(r.seconds)
            << '\n';
    }
  }
  const bool ok = std::all_of(all.begin(), all.end(), [](const auto& r) { return r.passed; });
  return ok ? kExitOk : kExitCheckFailed;
}

int execute(RunConfig c, std::ostream& out, std::ostream& err) {
  const report::Format format = report::parse_format(c.format);
  c.seed = resolve_seed(c);
  std::ofstream file;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) throw DomainError("cannot open output file '" + c.output + "'");
  }
  const Output o{format, c.output.empty() ? out : file};
  if (c.command == "threshold") return cmd_threshold(c, o);
  if (c.command == "ldp") return cmd_ldp(c, o);
  if (c.command == "type1") return cmd_estimate(c, o, ErrorKind::type1);
  if (c.command == "type2") return cmd_estimate(c, o, ErrorKind::type2);
  if (c.command == "reproduce") return cmd_reproduce(c, o, err);
  if (c.command == "check") return cmd_check(c, o);
  throw DomainError("unknown command '" + c.command + "'");
}

void add_model_options(CLI::App* s, RunConfig& c) {
  s->add_option("--beta", c.beta, "fractional order beta > 0");
  s->add_option("--gamma", c.gamma, "noise smoothness gamma >= 0");
  s->add_option("--sigma", c.sigma, "noise intensity sigma > 0");
  s->add_option("--d", c.d, "space dimension");
  s->add_option("--N", c.N, "number of observed Fourier modes");
  s->add_option("--basis", c.basis, "eigenvalue source: power | explicit");
  s->add_option("--eigenvalues", c.eigenvalues, "explicit eigenvalues, comma separated")->delimiter(',');
  s->add_option("--u0", c.u0, "initial mode values, comma separated")->delimiter(',');
  s->add_option("--theta0", c.theta0, "null drift");
  s->add_option("--theta1", c.theta1, "alternative drift");
  s->add_option("--alpha", c.alpha, "significance level");
  s->add_option("--rho", c.rho, "relative slack on the error bound");
  s->add_option("--T", c.T, "observation horizon");
}

void add_run_options(CLI::App* s, RunConfig& c) {
  s->add_option("--m", c.m, "Monte Carlo trials");
  s->add_option("--seed", c.seed, "base seed (default: $SPDE_LRT_SEED or built-in)");
  s->add_option("--workers", c.workers, "worker threads, 0 = all cores");
}

void add_output_options(CLI::App* s, RunConfig& c) {
  s->add_option("--format", c.format, "text | csv | json");
  s->add_option("--output,-o", c.output, "write to file instead of stdout");
}

}  // namespace

json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"beta", c.beta},
          {"gamma", c.gamma},
          {"sigma", c.sigma},
          {"d", c.d},
          {"N", c.N},
          {"basis", c.basis},
          {"eigenvalues", c.eigenvalues},
          {"u0", c.u0},
          {"theta0", c.theta0},
          {"theta1", c.theta1},
          {"alpha", c.alpha},
          {"rho", c.rho},
          {"T", c.T},
          {"n", opt(c.n)},
          {"dt", opt(c.dt)},
          {"test", c.test},
          {"route", c.route},
          {"m", c.m},
          {"seed", opt(c.seed)},
          {"workers", c.workers},
          {"regime", c.regime},
          {"hypothesis", c.hypothesis},
          {"epsilon", opt(c.epsilon)},
          {"level", opt(c.level)},
          {"table", c.table},
          {"bound_only", c.bound_only},
          {"check", c.check},
          {"columns", c.columns},
          {"criteria", c.criteria},
          {"format", c.format},
          {"output", c.output}};
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "command", "beta",   "gamma",  "sigma",      "d",     "N",         "basis",   "eigenvalues",
      "u0",      "theta0", "theta1", "alpha",      "rho",   "T",         "n",       "dt",
      "test",    "route",  "m",      "seed",       "workers", "regime",  "hypothesis", "epsilon",
      "level",   "table",  "bound_only", "check",  "columns", "criteria", "format", "output"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw DomainError("unknown config key '" + it.key() + "'");
    }
  }
  RunConfig c;
  try {
    read(j, "command", c.command);
    read(j, "beta", c.beta);
    read(j, "gamma", c.gamma);
    read(j, "sigma", c.sigma);
    read(j, "d", c.d);
    read(j, "N", c.N);
    read(j, "basis", c.basis);
    read(j, "eigenvalues", c.eigenvalues);
    read(j, "u0", c.u0);
    read(j, "theta0", c.theta0);
    read(j, "theta1", c.theta1);
    read(j, "alpha", c.alpha);
    read(j, "rho", c.rho);
    read(j, "T", c.T);
    read(j, "n", c.n);
    read(j, "dt", c.dt);
    read(j, "test", c.test);
    read(j, "route", c.route);
    read(j, "m", c.m);
    read(j, "seed", c.seed);
    read(j, "workers", c.workers);
    read(j, "regime", c.regime);
    read(j, "hypothesis", c.hypothesis);
    read(j, "epsilon", c.epsilon);
    read(j, "level", c.level);
    read(j, "table", c.table);
    read(j, "bound_only", c.bound_only);
    read(j, "check", c.check);
    read(j, "columns", c.columns);
    read(j, "criteria", c.criteria);
    read(j, "format", c.format);
    read(j, "output", c.output);
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad config value: ") + e.what());
  }
  return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string replay_path;
  CLI::App app{"Calibrated likelihood-ratio tests for the drift of a spectrally observed "
               "stochastic heat equation"};
  app.name(kProgram);
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* threshold = app.add_subcommand("threshold", "calibrated levels, T_b, mode conditions, c#");
  add_model_options(threshold, c);
  add_output_options(threshold, c);

  auto* ldp = app.add_subcommand("ldp", "sharp large-deviation quantities");
  add_model_options(ldp, c);
  add_output_options(ldp, c);
  ldp->add_option("--regime", c.regime, "time | mode");
  ldp->add_option("--hypothesis,-j", c.hypothesis, "0 or 1");
  ldp->add_option("--epsilon", c.epsilon, "MGF argument (default: tilt at the level)");
  ldp->add_option("--level", c.level, "eta or zeta (default: calibrated level)");

  for (const char* name : {"type1", "type2"}) {
    auto* s = app.add_subcommand(name, std::string("Monte Carlo estimate of the ") +
                                           (name[4] == '1' ? "Type I" : "Type II") + " error");
    add_model_options(s, c);
    add_run_options(s, c);
    add_output_options(s, c);
    s->add_option("--test", c.test, "rt0 | rtsharp | rn0");
    s->add_option("--route", c.route, "ito | direct");
    s->add_option("--n", c.n, "time steps");
    s->add_option("--dt", c.dt, "largest time step (ignored when --n is given)");
  }

  auto* repro = app.add_subcommand("reproduce", "rerun a published table preset");
  repro->add_option("--table", c.table, "table number 1..5")->required();
  repro->add_flag("--bound-only", c.bound_only, "closed-form rows only");
  repro->add_flag("--check", c.check, "exit 3 if an acceptance cell misses its tolerance");
  repro->add_option("--columns", c.columns, "subset of column keys, e.g. T=10,T=40")->delimiter(',');
  repro->add_option("--dt", c.dt, "cap on the time step of the preset grids");
  add_run_options(repro, c);
  add_output_options(repro, c);

  auto* check = app.add_subcommand("check", "run the acceptance suite");
  check->add_option("--only", c.criteria, "criterion numbers, comma separated")->delimiter(',');
  add_run_options(check, c);
  add_output_options(check, c);

  auto* replay = app.add_subcommand("replay", "rerun the config echoed in a JSON output file");
  replay->add_option("file", replay_path, "JSON output or config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitUsage;
  }

  try {
    if (replay->parsed()) {
      std::ifstream in(replay_path);
      if (!in) throw DomainError("cannot read '" + replay_path + "'");
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw DomainError(std::string("'") + replay_path + "' is not valid JSON: " + e.what());
      }
      if (j.contains("metadata")) j = j.at("metadata");
      if (j.contains("config")) j = j.at("config");
      return execute(config_from_json(j), out, err);
    }
    for (const CLI::App* s : app.get_subcommands()) c.command = s->get_name();
    return execute(c, out, err);
  } catch (const StabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace spde_lrt::cli
