#pragma once

#include <cmath>
#include <concepts>
#include <span>
#include <string_view>

#include "spde_lrt/model.hpp"
#include "spde_lrt/numeric.hpp"
#include "spde_lrt/thresholds.hpp"

namespace spde_lrt {

// Sufficient statistics of one simulated bundle of N Fourier modes.
struct TrialStats {
  double X = 0.0;      // sum_k lambda^{2b+2g} u_k(T)^2
  double Y = 0.0;      // sum_k lambda^{2b+g} sum_i u_k(t_{i-1}) xi_{k,i}
  double Dstat = 0.0;  // sum_k lambda^{2b+2g} sum_i u_k(t_{i-1}) (u_k(t_i) - u_k(t_{i-1}))
  double Q = 0.0;      // sum_k lambda^{4b+2g} sum_i u_k(t_{i-1})^2 dt
  double theta_sim = 0.0;

  friend bool operator==(const TrialStats&, const TrialStats&) = default;
};

// Anything yielding standard normal deviates.
template <class S>
concept NormalSource = requires(S& s) {
  { s.next_normal() } -> std::convertible_to<double>;
};

// Hard limit for the simulated drift: theta_sim * lambda_N^{2 beta} * dt < 1.
// Throws StabilityError carrying the smallest admissible n.
void check_stability(const ModelParams& model, const TimeGrid& grid, double theta_sim);

// Explicit Euler-Maruyama for the N Ornstein-Uhlenbeck modes,
//   u_k(t_i) = u_k(t_{i-1}) - theta lambda_k^{2b} u_k(t_{i-1}) dt + sigma lambda_k^{-g} xi_{k,i},
// xi ~ N(0, dt). Deviates are drawn mode by mode, then step by step, so the result
// is a pure function of the stream. Paths are never stored.
template <NormalSource S>
TrialStats simulate_trial(const ModelParams& model, const TimeGrid& grid, double theta_sim,
                          S& stream) {
  check_stability(model, grid, theta_sim);
  const double dt = grid.dt();
  const double sqrt_dt = std::sqrt(dt);
  const std::int64_t n = grid.steps();
  const auto weights = model.weights();
  const auto u0 = model.initial();

  CompensatedSum X, Y, D, Q;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const ModeWeights& w = weights[k];
    const double decay = theta_sim * w.drift * dt;
    const double scale = model.sigma() * w.noise;
    double u = u0[k];
    double cross = 0.0;
    double incr = 0.0;
    double energy = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double xi = sqrt_dt * static_cast<double>(stream.next_normal());
      const double step = scale * xi - decay * u;
      cross += u * xi;
      incr += u * step;
      energy += u * u;
      u += step;
    }
    X.add(w.x_weight * u * u);
    Y.add(w.y_weight * cross);
    D.add(w.x_weight * incr);
    Q.add(w.q_weight * energy * dt);
  }
  return {X.value(), Y.value(), D.value(), Q.value(), theta_sim};
}

// Two representations of ln L(theta0, theta1):
//   ito:    Ito-rearranged form using the terminal energy X and the noise term Y,
//           exact in quadratic variation; valid for u0 = 0.
//   direct: the discretised likelihood ratio with the integral sums Dstat and Q.
enum class Route { ito, direct };

std::string_view to_string(Route r);
Route parse_route(std::string_view s);

double log_lr(const TrialStats& stats, const Hypotheses& hyp, const ModelParams& model,
              const TimeGrid& grid, Route route = Route::ito);

enum class TestKind { rt0, rt_sharp, rn0 };

std::string_view to_string(TestKind t);
TestKind parse_test_kind(std::string_view s);

// Thresholds for one experiment, computed once.
struct DecisionLevels {
  CalibratedLevel calibrated;  // eta* (time regime) or zeta* (mode regime)
  SharpThreshold sharp;
};

DecisionLevels decision_levels(TestKind test, double alpha, const ModelParams& model,
                               const TimeGrid& grid, const Hypotheses& hyp);

// (dtheta X / (2 sigma (theta0 + theta1)) - Y) / sqrt(scale), with scale = T or M.
double normalized_statistic(const TrialStats& stats, const Hypotheses& hyp,
                            const ModelParams& model, double scale);

// True when the test rejects the null hypothesis on this trial.
bool decide(TestKind test, const TrialStats& stats, const DecisionLevels& levels,
            const ModelParams& model, const TimeGrid& grid, const Hypotheses& hyp,
            Route route = Route::ito);

// theta_hat = -Dstat / Q. Throws DegenerateError when Q == 0.
double mle(const TrialStats& stats);

}  // namespace spde_lrt
