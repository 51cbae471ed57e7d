#include "spde_lrt/sld.hpp"

#include <cmath>
#include <string>

#include "spde_lrt/error.hpp"
#include "spde_lrt/numeric.hpp"

namespace spde_lrt {

namespace {

void check_index(int j) {
  if (j != 0 && j != 1) throw DomainError("hypothesis index must be 0 or 1");
}

// b_j(eps)^2
double radicand(double epsilon, int j, const Hypotheses& hyp) {
  const double th = hyp.theta(j);
  return th * th + hyp.sq_gap() * epsilon;
}

double checked_root(double epsilon, int j, const Hypotheses& hyp) {
  check_index(j);
  const double r = radicand(epsilon, j, hyp);
  if (!(r > 0.0)) {
    throw DomainError("epsilon " + std::to_string(epsilon) +
                      " is at or below the admissible bound " +
                      std::to_string(epsilon_lower_bound(j, hyp)));
  }
  return std::sqrt(r);
}

void check_level(double level, const Hypotheses& hyp, double weight) {
  if (!(weight > 0.0)) throw DomainError("scale weight must be positive");
  const LevelInterval iv = admissible_levels(hyp, weight);
  if (!(level >= iv.lo && level < iv.hi)) {
    throw DomainError("level " + std::to_string(level) + " outside admissible interval [" +
                      std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + ")");
  }
}

}  // namespace

std::string_view to_string(Regime r) { return r == Regime::time ? "time" : "mode"; }

double epsilon_lower_bound(int j, const Hypotheses& hyp) {
  check_index(j);
  const double th = hyp.theta(j);
  return -th * th / hyp.sq_gap();
}

GfComponents gf_components(double epsilon, int j, const Hypotheses& hyp) {
  const double b = checked_root(epsilon, j, hyp);
  const double num = hyp.theta(j) + hyp.gap() * epsilon;
  GfComponents g;
  g.L = 0.5 * (num - b);
  g.D = num / b;
  g.H = -0.5 * std::log(0.5 + 0.5 * g.D);
  return g;
}

double gf_leading_derivative(double epsilon, int j, const Hypotheses& hyp) {
  const double b = checked_root(epsilon, j, hyp);
  return 0.5 * (hyp.gap() - hyp.sq_gap() / (2.0 * b));
}

double residual_R(double epsilon, int j, const Hypotheses& hyp, const ModelParams& model,
                  double horizon) {
  if (!(horizon > 0.0)) throw DomainError("horizon T must be positive");
  const double b = checked_root(epsilon, j, hyp);
  const double D = (hyp.theta(j) + hyp.gap() * epsilon) / b;
  const double ratio = (1.0 - D) / (1.0 + D);
  CompensatedSum acc;
  for (const ModeWeights& w : model.weights()) {
    const double term = ratio * std::exp(-2.0 * w.drift * horizon * b);
    if (!(term > -1.0)) {
      throw DomainError("residual log argument is not positive");
    }
    acc.add(std::log1p(term));
  }
  return -0.5 * acc.value();
}

double mgf_exponent(double epsilon, int j, const Hypotheses& hyp, const ModelParams& model,
                    double horizon, Regime scaling) {
  const GfComponents g = gf_components(epsilon, j, hyp);
  const double R = residual_R(epsilon, j, hyp, model, horizon);
  const double M = model.spectral_weight();
  const auto N = static_cast<double>(model.modes());
  if (scaling == Regime::time) {
    return M * g.L + (N * g.H + R) / horizon;
  }
  return horizon * g.L + (N * g.H + R) / M;
}

LevelInterval admissible_levels(const Hypotheses& hyp, double weight) {
  const double dth = hyp.gap();
  return {-dth * dth * weight / (4.0 * hyp.theta0), dth * weight / 2.0};
}

TiltPoint tilt_epsilon(double level, int j, const Hypotheses& hyp, double weight) {
  check_index(j);
  check_level(level, hyp, weight);
  const double c = -2.0 * level + hyp.gap() * weight;
  if (c == 0.0) throw DomainError("tilt is singular at level = dtheta * w / 2");
  const double P = hyp.sq_gap();
  const double th = hyp.theta(j);
  const double num = P * P * weight * weight - 4.0 * th * th * c * c;
  return {num / (4.0 * P * c * c), j};
}

double rate_function(double level, int j, const Hypotheses& hyp, double weight) {
  check_index(j);
  check_level(level, hyp, weight);
  const double dth = hyp.gap();
  const double sign = j == 0 ? 1.0 : -1.0;
  const double den = 2.0 * level - dth * weight;
  if (den == 0.0) throw DomainError("rate function is singular at level = dtheta * w / 2");
  const double top = 4.0 * hyp.theta(j) * level + sign * dth * dth * weight;
  return -(top * top) / (8.0 * den * hyp.sq_gap());
}

double log_a_factor(double level, int j, const Hypotheses& hyp, const ModelParams& model,
                    double horizon, Regime scale) {
  if (!(horizon > 0.0)) throw DomainError("horizon T must be positive");
  const double M = model.spectral_weight();
  const double weight = scale == Regime::time ? M : horizon;
  const double multiplier = scale == Regime::time ? horizon : M;
  const TiltPoint tilt = tilt_epsilon(level, j, hyp, weight);
  const double I = rate_function(level, j, hyp, weight);
  const GfComponents g = gf_components(tilt.epsilon, j, hyp);
  const double R = residual_R(tilt.epsilon, j, hyp, model, horizon);
  return -I * multiplier + static_cast<double>(model.modes()) * g.H + R;
}

double a_factor(double level, int j, const Hypotheses& hyp, const ModelParams& model,
                double horizon, Regime scale) {
  return std::exp(log_a_factor(level, j, hyp, model, horizon, scale));
}

}  // namespace spde_lrt
