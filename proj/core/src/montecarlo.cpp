#include "spde_lrt/montecarlo.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace spde_lrt {

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  std::uint64_t v = 0;
  const char* end = env + std::strlen(env);
  auto res = std::from_chars(env, end, v);
  if (res.ec != std::errc{} || res.ptr != end) return kDefaultSeed;
  return v;
}

WilsonInterval wilson_interval(std::int64_t events, std::int64_t trials, double z) {
  if (trials <= 0) throw DomainError("Wilson interval needs at least one trial");
  const auto m = static_cast<double>(trials);
  const double p = static_cast<double>(events) / m;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / m;
  const double centre = (p + z2 / (2.0 * m)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / m + z2 / (4.0 * m * m)) / denom;
  // The endpoints are exactly 0 and 1 at p = 0 and p = 1; rounding would leave a few ulps.
  return {events == 0 ? 0.0 : std::max(0.0, centre - half),
          events == trials ? 1.0 : std::min(1.0, centre + half)};
}

ErrorEstimate make_estimate(TestKind test, ErrorKind error, std::int64_t events, std::int64_t m) {
  if (m <= 0) throw DomainError("trial count m must be at least 1");
  ErrorEstimate e;
  e.test = test;
  e.error = error;
  e.events = events;
  e.m = m;
  e.p_hat = static_cast<double>(events) / static_cast<double>(m);
  e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(m));
  const WilsonInterval ci = wilson_interval(events, m);
  e.ci_lo = ci.lo;
  e.ci_hi = ci.hi;
  return e;
}

std::string ErrorEstimate::canonical() const {
  auto hex = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "test=" << to_string(test) << ";error=" << to_string(error) << ";events=" << events
     << ";m=" << m << ";p_hat=" << hex(p_hat) << ";std_error=" << hex(std_error)
     << ";ci_lo=" << hex(ci_lo) << ";ci_hi=" << hex(ci_hi)
     << ";mean_log_lr=" << hex(mean_log_lr) << ";steps=" << steps << ";seed=" << seed
     << ";rng=" << rng_algorithm;
  return os.str();
}

void validate(const ExperimentSpec& spec) {
  if (spec.m < 1) throw DomainError("trial count m must be at least 1");
  if (!(spec.level.alpha > 0.0 && spec.level.alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1)");
  }
  if (spec.route == Route::ito && spec.model.nonzero_initial()) {
    throw DomainError("the ito route assumes u0 = 0; use the direct route");
  }
  check_stability(spec.model, spec.grid, spec.theta_sim());
}

std::vector<ErrorEstimate> estimate_errors(const ExperimentSpec& spec,
                                           std::span<const TestKind> tests) {
  return estimate_errors_with(spec, tests, [](std::uint64_t seed, std::uint64_t trial) {
    return NormalStream(seed, trial);
  });
}

ErrorEstimate estimate_error(const ExperimentSpec& spec) {
  const TestKind tests[] = {spec.test};
  return estimate_errors(spec, tests).front();
}

}  // namespace spde_lrt
