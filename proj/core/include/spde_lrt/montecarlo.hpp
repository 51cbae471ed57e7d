#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spde_lrt/error.hpp"
#include "spde_lrt/model.hpp"
#include "spde_lrt/numeric.hpp"
#include "spde_lrt/parallel.hpp"
#include "spde_lrt/rng.hpp"
#include "spde_lrt/sim.hpp"
#include "spde_lrt/thresholds.hpp"

namespace spde_lrt {

inline constexpr std::uint64_t kDefaultSeed = 20130917ull;
inline constexpr const char* kSeedEnvVar = "SPDE_LRT_SEED";
inline constexpr std::int64_t kTrialsPerChunk = 64;

// Seed from SPDE_LRT_SEED when set and parseable, kDefaultSeed otherwise.
std::uint64_t default_seed();

struct ExperimentSpec {
  ModelParams model = reference_model(3);
  TimeGrid grid = TimeGrid::make(100.0, 5000);
  Hypotheses hyp{0.1, 0.2};
  TestLevel level{0.05, 0.1};
  TestKind test = TestKind::rt0;
  ErrorKind error = ErrorKind::type1;
  Route route = Route::ito;
  std::int64_t m = 20000;
  std::uint64_t base_seed = kDefaultSeed;
  unsigned workers = 0;

  // Type I simulates under theta0, Type II under theta1.
  double theta_sim() const { return error == ErrorKind::type1 ? hyp.theta0 : hyp.theta1; }
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

WilsonInterval wilson_interval(std::int64_t events, std::int64_t trials,
                               double z = 1.959963984540054);

struct ErrorEstimate {
  TestKind test = TestKind::rt0;
  ErrorKind error = ErrorKind::type1;
  std::int64_t events = 0;
  std::int64_t m = 0;
  double p_hat = 0.0;
  double std_error = 0.0;  // sqrt(p (1 - p) / m)
  double ci_lo = 0.0;      // Wilson 95%
  double ci_hi = 0.0;
  double mean_log_lr = 0.0;
  std::int64_t steps = 0;
  std::uint64_t seed = 0;
  std::string rng_algorithm{kRngAlgorithm};
  double runtime_seconds = 0.0;

  // Every field except the wall-clock runtime, floats as hex: equal strings mean
  // bit-identical estimates.
  std::string canonical() const;
};

// Builds the estimate from an event count.
ErrorEstimate make_estimate(TestKind test, ErrorKind error, std::int64_t events, std::int64_t m);

void validate(const ExperimentSpec& spec);

// Several tests evaluated on one set of simulated paths. Trial j draws its noise
// from make_stream(base_seed, j); the result does not depend on spec.workers.
template <class StreamFactory>
std::vector<ErrorEstimate> estimate_errors_with(const ExperimentSpec& spec,
                                                std::span<const TestKind> tests,
                                                StreamFactory&& make_stream) {
  validate(spec);
  const auto start = std::chrono::steady_clock::now();
  const double theta_sim = spec.theta_sim();
  const double alpha = spec.level.alpha;

  std::vector<DecisionLevels> levels;
  levels.reserve(tests.size());
  for (TestKind t : tests) levels.push_back(decision_levels(t, alpha, spec.model, spec.grid, spec.hyp));

  struct Partial {
    std::vector<std::int64_t> events;
    double log_lr_sum = 0.0;
  };

  auto partials = map_chunks<Partial>(
      spec.m, kTrialsPerChunk, spec.workers, [&](std::int64_t begin, std::int64_t end) {
        Partial p;
        p.events.assign(tests.size(), 0);
        CompensatedSum lsum;
        for (std::int64_t j = begin; j < end; ++j) {
          auto stream = make_stream(spec.base_seed, static_cast<std::uint64_t>(j));
          const TrialStats stats = simulate_trial(spec.model, spec.grid, theta_sim, stream);
          for (std::size_t t = 0; t < tests.size(); ++t) {
            const bool reject =
                decide(tests[t], stats, levels[t], spec.model, spec.grid, spec.hyp, spec.route);
            const bool event = spec.error == ErrorKind::type1 ? reject : !reject;
            p.events[t] += event ? 1 : 0;
          }
          lsum.add(log_lr(stats, spec.hyp, spec.model, spec.grid, spec.route));
        }
        p.log_lr_sum = lsum.value();
        return p;
      });

  std::vector<std::int64_t> events(tests.size(), 0);
  CompensatedSum lsum;
  for (const Partial& p : partials) {
    for (std::size_t t = 0; t < tests.size(); ++t) events[t] += p.events[t];
    lsum.add(p.log_lr_sum);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<ErrorEstimate> out;
  out.reserve(tests.size());
  for (std::size_t t = 0; t < tests.size(); ++t) {
    ErrorEstimate e = make_estimate(tests[t], spec.error, events[t], spec.m);
    e.mean_log_lr = lsum.value() / static_cast<double>(spec.m);
    e.steps = spec.grid.steps();
    e.seed = spec.base_seed;
    e.runtime_seconds = seconds;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ErrorEstimate> estimate_errors(const ExperimentSpec& spec, std::span<const TestKind> tests);

// One test, Philox/ziggurat noise keyed by (base_seed, trial index).
ErrorEstimate estimate_error(const ExperimentSpec& spec);

}  // namespace spde_lrt
