#include "spde_lrt/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "spde_lrt/error.hpp"
#include "spde_lrt/numeric.hpp"

namespace spde_lrt {

Hypotheses Hypotheses::make(double theta0, double theta1) {
  if (!(theta0 > 0.0) || !std::isfinite(theta0)) {
    throw DomainError("theta0 must be positive and finite");
  }
  if (!(theta1 > theta0) || !std::isfinite(theta1)) {
    throw DomainError("theta1 must exceed theta0");
  }
  return {theta0, theta1};
}

TestLevel TestLevel::make(double alpha, double rho) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive");
  return {alpha, rho};
}

std::string_view to_string(Basis b) {
  return b == Basis::power ? "power" : "explicit";
}

Basis parse_basis(std::string_view s) {
  if (s == "power") return Basis::power;
  if (s == "explicit") return Basis::explicit_list;
  throw DomainError("unknown basis '" + std::string(s) + "' (expected power|explicit)");
}

bool ModelParams::nonzero_initial() const {
  return std::any_of(u0_.begin(), u0_.end(), [](double v) { return v != 0.0; });
}

ModelParams build_model(double beta, double gamma, double sigma, int d, std::size_t n_modes,
                        const EigenvalueSource& source, std::vector<double> u0) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be non-negative");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (d < 1) throw DomainError("dimension d must be a positive integer");
  if (n_modes < 1) throw DomainError("N must be at least 1");

  ModelParams m;
  m.beta_ = beta;
  m.gamma_ = gamma;
  m.sigma_ = sigma;
  m.d_ = d;
  m.basis_ = source.basis;

  if (source.basis == Basis::power) {
    m.eigenvalues_.resize(n_modes);
    const double inv_d = 1.0 / static_cast<double>(d);
    for (std::size_t k = 0; k < n_modes; ++k) {
      const auto kk = static_cast<double>(k + 1);
      m.eigenvalues_[k] = d == 1 ? kk : std::pow(kk, inv_d);
    }
  } else {
    if (source.values.size() != n_modes) {
      throw DomainError("explicit eigenvalue list has " + std::to_string(source.values.size()) +
                        " entries, expected N = " + std::to_string(n_modes));
    }
    for (std::size_t k = 0; k < n_modes; ++k) {
      const double v = source.values[k];
      if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("eigenvalues must be positive");
      if (k > 0 && v < source.values[k - 1]) {
        throw DomainError("eigenvalues must be non-decreasing");
      }
    }
    m.eigenvalues_ = source.values;
  }

  if (u0.empty()) {
    m.u0_.assign(n_modes, 0.0);
  } else if (u0.size() != n_modes) {
    throw DomainError("u0 must have N entries");
  } else {
    for (double v : u0) {
      if (!std::isfinite(v)) throw DomainError("u0 entries must be finite");
    }
    m.u0_ = std::move(u0);
  }

  m.weights_.resize(n_modes);
  CompensatedSum M;
  for (std::size_t k = 0; k < n_modes; ++k) {
    const double lam = m.eigenvalues_[k];
    ModeWeights& w = m.weights_[k];
    w.lambda = lam;
    w.drift = std::pow(lam, 2.0 * beta);
    w.noise = std::pow(lam, -gamma);
    w.x_weight = std::pow(lam, 2.0 * beta + 2.0 * gamma);
    w.y_weight = std::pow(lam, 2.0 * beta + gamma);
    w.q_weight = std::pow(lam, 4.0 * beta + 2.0 * gamma);
    M.add(w.drift);
  }
  m.spectral_weight_ = M.value();
  return m;
}

ModelParams reference_model(std::size_t n_modes) {
  return build_model(1.0, 0.0, 1.0, 1, n_modes);
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_list(std::span<const double> xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  out += "]";
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(std::string_view s, std::string_view key) {
  s = trim(s);
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto res = std::from_chars(first, s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw DomainError("config key '" + std::string(key) + "': cannot parse number '" +
                      std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view s, std::string_view key) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw DomainError("config key '" + std::string(key) + "': expected [a, b, ...]");
  }
  s = trim(s.substr(1, s.size() - 2));
  std::vector<double> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(parse_number(s.substr(0, comma), key));
    if (comma == std::string_view::npos) break;
    s = trim(s.substr(comma + 1));
  }
  return out;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

std::string to_config(const ModelParams& model) {
  std::ostringstream os;
  os << "beta = " << format_double(model.beta()) << '\n'
     << "gamma = " << format_double(model.gamma()) << '\n'
     << "sigma = " << format_double(model.sigma()) << '\n'
     << "d = " << model.dimension() << '\n'
     << "N = " << model.modes() << '\n'
     << "basis = \"" << to_string(model.basis()) << "\"\n"
     << "eigenvalues = " << format_list(model.eigenvalues()) << '\n'
     << "u0 = " << format_list(model.initial()) << '\n';
  return os.str();
}

ModelParams model_from_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DomainError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    kv[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
  }

  auto get = [&](std::string_view key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto number_or = [&](std::string_view key, double fallback) {
    const std::string* v = get(key);
    return v ? parse_number(*v, key) : fallback;
  };

  static constexpr std::string_view known[] = {"beta", "gamma", "sigma", "d", "N",
                                               "basis", "eigenvalues", "u0"};
  for (const auto& [k, _] : kv) {
    if (std::find(std::begin(known), std::end(known), k) == std::end(known)) {
      throw DomainError("unknown config key '" + k + "'");
    }
  }

  const double beta = number_or("beta", 1.0);
  const double gamma = number_or("gamma", 0.0);
  const double sigma = number_or("sigma", 1.0);
  const double d_raw = number_or("d", 1.0);
  const std::string* n_raw = get("N");
  const Basis basis = get("basis") ? parse_basis(unquote(*get("basis"))) : Basis::power;

  std::vector<double> eig;
  if (const std::string* v = get("eigenvalues")) eig = parse_list(*v, "eigenvalues");

  double n_modes = 0.0;
  if (n_raw) {
    n_modes = parse_number(*n_raw, "N");
  } else if (!eig.empty()) {
    n_modes = static_cast<double>(eig.size());
  } else {
    throw DomainError("config must specify N");
  }
  if (n_modes != std::floor(n_modes) || n_modes < 1) throw DomainError("N must be a positive integer");
  if (d_raw != std::floor(d_raw) || d_raw < 1) throw DomainError("d must be a positive integer");

  std::vector<double> u0;
  if (const std::string* v = get("u0")) u0 = parse_list(*v, "u0");

  const EigenvalueSource src =
      basis == Basis::power ? EigenvalueSource::power_law() : EigenvalueSource::explicit_list(eig);
  return build_model(beta, gamma, sigma, static_cast<int>(d_raw),
                     static_cast<std::size_t>(n_modes), src, std::move(u0));
}

TimeGrid TimeGrid::make(double horizon, std::int64_t steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon T must be positive");
  if (steps < 1) throw DomainError("step count n must be at least 1");
  TimeGrid g;
  g.horizon_ = horizon;
  g.steps_ = steps;
  g.dt_ = horizon / static_cast<double>(steps);
  return g;
}

TimeGrid TimeGrid::with_max_step(double horizon, double max_step) {
  if (!(max_step > 0.0)) throw DomainError("max step must be positive");
  // Shave a few ulps so that e.g. 100 / 0.02 gives 5000 rather than 5001.
  const double ratio = horizon / max_step;
  auto n = static_cast<std::int64_t>(std::ceil(ratio * (1.0 - 4.0 * 2.220446049250313e-16)));
  return make(horizon, std::max<std::int64_t>(n, 1));
}

double stability_number(const ModelParams& model, const TimeGrid& grid, double theta) {
  return theta * model.max_drift() * grid.dt();
}

std::int64_t steps_for_margin(const ModelParams& model, double horizon, double theta,
                              double margin) {
  const double ratio = theta * model.max_drift() * horizon / margin;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                       std::ceil(ratio * (1.0 - 4.0 * 2.220446049250313e-16))));
}

TimeGrid stable_grid(const ModelParams& model, const Hypotheses& hyp, double horizon,
                     std::optional<double> max_step, double margin) {
  std::int64_t n = steps_for_margin(model, horizon, hyp.theta1, margin);
  if (max_step) n = std::max(n, TimeGrid::with_max_step(horizon, *max_step).steps());
  return TimeGrid::make(horizon, n);
}

}  // namespace spde_lrt
