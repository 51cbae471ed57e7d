#include "spde_lrt/sim.hpp"

#include <cmath>
#include <string>

#include "spde_lrt/error.hpp"

namespace spde_lrt {

void check_stability(const ModelParams& model, const TimeGrid& grid, double theta_sim) {
  if (!(theta_sim > 0.0)) throw DomainError("simulation drift must be positive");
  const double s = stability_number(model, grid, theta_sim);
  if (!(s < 1.0)) {
    const std::int64_t need = steps_for_margin(model, grid.horizon(), theta_sim, 1.0) + 1;
    throw StabilityError("explicit scheme unstable: theta*lambda_N^{2beta}*dt = " +
                             std::to_string(s) + " >= 1; need n >= " + std::to_string(need),
                         need);
  }
}

std::string_view to_string(Route r) { return r == Route::ito ? "ito" : "direct"; }

Route parse_route(std::string_view s) {
  if (s == "ito" || s == "A" || s == "a") return Route::ito;
  if (s == "direct" || s == "B" || s == "b") return Route::direct;
  throw DomainError("unknown route '" + std::string(s) + "' (expected ito|direct)");
}

double log_lr(const TrialStats& stats, const Hypotheses& hyp, const ModelParams& model,
              const TimeGrid& grid, Route route) {
  const double sigma = model.sigma();
  const double scale = -hyp.gap() / (sigma * sigma);
  if (route == Route::direct) {
    return scale * (stats.Dstat + 0.5 * hyp.sum() * stats.Q);
  }
  if (model.nonzero_initial()) {
    throw DomainError("the ito route assumes u0 = 0; use the direct route");
  }
  if (!(stats.theta_sim > 0.0)) throw DomainError("stats carry no simulation drift");
  // Under drift theta_sim, lambda^{2b} int u^2 = (sigma lambda^{-g} int u dw - int u du) / theta_sim.
  const double c2 = hyp.sum() / (2.0 * stats.theta_sim);
  const double c1 = 1.0 - c2;
  const double compensator = sigma * sigma * model.spectral_weight() * grid.horizon();
  return scale * (c1 * 0.5 * (stats.X - compensator) + c2 * sigma * stats.Y);
}

std::string_view to_string(TestKind t) {
  switch (t) {
    case TestKind::rt0: return "rt0";
    case TestKind::rt_sharp: return "rtsharp";
    case TestKind::rn0: return "rn0";
  }
  return "?";
}

TestKind parse_test_kind(std::string_view s) {
  if (s == "rt0") return TestKind::rt0;
  if (s == "rtsharp" || s == "rt_sharp" || s == "rt#") return TestKind::rt_sharp;
  if (s == "rn0") return TestKind::rn0;
  throw DomainError("unknown test '" + std::string(s) + "' (expected rt0|rtsharp|rn0)");
}

DecisionLevels decision_levels(TestKind test, double alpha, const ModelParams& model,
                               const TimeGrid& grid, const Hypotheses& hyp) {
  DecisionLevels lv;
  lv.calibrated = test == TestKind::rn0 ? mode_level(alpha, grid.horizon(), model, hyp)
                                        : time_level(alpha, grid.horizon(), model, hyp);
  lv.sharp = sharp_threshold(alpha, grid.horizon(), model, hyp);
  return lv;
}

double normalized_statistic(const TrialStats& stats, const Hypotheses& hyp,
                            const ModelParams& model, double scale) {
  const double sigma = model.sigma();
  return (hyp.gap() * stats.X / (2.0 * sigma * hyp.sum()) - stats.Y) / std::sqrt(scale);
}

bool decide(TestKind test, const TrialStats& stats, const DecisionLevels& levels,
            const ModelParams& model, const TimeGrid& grid, const Hypotheses& hyp, Route route) {
  const Regime want = test == TestKind::rn0 ? Regime::mode : Regime::time;
  if (test != TestKind::rt_sharp && levels.calibrated.regime != want) {
    throw DomainError(std::string("test ") + std::string(to_string(test)) + " needs " +
                      std::string(to_string(want)) + "-regime levels");
  }

  const double T = grid.horizon();
  const double M = model.spectral_weight();
  const double sigma = model.sigma();
  // The normalised-statistic form is an exact rearrangement only under the null dynamics.
  const bool null_form = route == Route::ito && stats.theta_sim == hyp.theta0;

  switch (test) {
    case TestKind::rt0:
      if (null_form) {
        return normalized_statistic(stats, hyp, model, T) >=
               2.0 * hyp.theta0 * sigma * levels.calibrated.delta * std::sqrt(T) / hyp.sq_gap();
      }
      return log_lr(stats, hyp, model, grid, route) >= levels.calibrated.level * T;
    case TestKind::rt_sharp:
      if (null_form) {
        return normalized_statistic(stats, hyp, model, T) >= levels.sharp.statistic_threshold;
      }
      return log_lr(stats, hyp, model, grid, route) >= levels.sharp.log_c_sharp;
    case TestKind::rn0:
      if (null_form) {
        return normalized_statistic(stats, hyp, model, M) >=
               2.0 * hyp.theta0 * sigma * levels.calibrated.delta * std::sqrt(M) / hyp.sq_gap();
      }
      return log_lr(stats, hyp, model, grid, route) >= levels.calibrated.level * M;
  }
  return false;
}

double mle(const TrialStats& stats) {
  if (stats.Q == 0.0) throw DegenerateError("MLE undefined: weighted path energy Q is zero");
  return -stats.Dstat / stats.Q;
}

}  // namespace spde_lrt
