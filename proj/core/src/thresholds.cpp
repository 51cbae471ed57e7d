#include "spde_lrt/thresholds.hpp"

#include <algorithm>
#include <cmath>

#include "spde_lrt/error.hpp"

namespace spde_lrt {

std::string_view to_string(ErrorKind k) { return k == ErrorKind::type1 ? "type1" : "type2"; }

CalibratedLevel calibrated_level(double alpha, double scale, double weight, const Hypotheses& hyp,
                                 Regime regime) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!(scale > 0.0) || !(weight > 0.0)) throw DomainError("scale and weight must be positive");
  const double th0 = hyp.theta0;
  const double dth = hyp.gap();
  const double a = -std::log(alpha) / scale;
  const double root = std::sqrt(th0 * weight * a + a * a);
  // Rationalised form of P/(2 theta0^2) * (root - a); no cancellation for large scale.
  const double delta = hyp.sq_gap() / (2.0 * th0 * th0) * (th0 * weight * a) / (a + root);
  const double left = -dth * dth * weight / (4.0 * th0);
  return {left + delta, delta, regime};
}

CalibratedLevel time_level(double alpha, double horizon, const ModelParams& model,
                           const Hypotheses& hyp) {
  return calibrated_level(alpha, horizon, model.spectral_weight(), hyp, Regime::time);
}

CalibratedLevel mode_level(double alpha, double horizon, const ModelParams& model,
                           const Hypotheses& hyp) {
  return calibrated_level(alpha, model.spectral_weight(), horizon, hyp, Regime::mode);
}

HorizonBound min_time(double alpha, double rho, std::size_t n_modes, double spectral_weight,
                      const Hypotheses& hyp, ErrorKind kind) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  if (!(spectral_weight > 0.0)) throw DomainError("M must be positive");
  if (n_modes < 1) throw DomainError("N must be at least 1");

  const double th0 = hyp.theta0;
  const double th1 = hyp.theta1;
  const double dth2 = hyp.gap() * hyp.gap();
  const double M = spectral_weight;
  const double log_a = std::log(alpha);
  const double n1 = static_cast<double>(n_modes) + 1.0;
  const double s4 = std::pow(hyp.sum(), 4);

  HorizonBound out;
  out.terms[0] = kind == ErrorKind::type1
                     ? -256.0 * th0 * log_a / (dth2 * M)
                     : -16.0 * (th1 * th1 + 16.0 * th0 * th0) * log_a / (th0 * dth2 * M);
  out.terms[1] = -16.0 * log_a / (th0 * M);
  out.terms[2] = -16.0 * (1.0 + rho) * (1.0 + rho) * th0 * dth2 * n1 * n1 * log_a /
                 (rho * rho * s4 * M);
  // -0.0 from ln(1) reads badly in output
  for (double& t : out.terms) t = t + 0.0;
  out.exact = *std::max_element(out.terms.begin(), out.terms.end());
  out.rounded = std::llround(out.exact);
  return out;
}

HorizonRequirement horizon_requirement(double alpha, double rho, std::size_t n_modes,
                                       double spectral_weight, const Hypotheses& hyp) {
  return {min_time(alpha, rho, n_modes, spectral_weight, hyp, ErrorKind::type1),
          min_time(alpha, rho, n_modes, spectral_weight, hyp, ErrorKind::type2)};
}

ModesCondition modes_condition(double alpha, double rho, double horizon, const ModelParams& model,
                               const Hypotheses& hyp, ErrorKind kind) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon T must be positive");

  const double th0 = hyp.theta0;
  const double th1 = hyp.theta1;
  const double dth2 = hyp.gap() * hyp.gap();
  const double log_a = std::log(alpha);
  const double n1 = static_cast<double>(model.modes()) + 1.0;

  const double lead = kind == ErrorKind::type1 ? 16.0 * th0 * th0 / dth2
                                               : (th1 * th1 + 16.0 * th0 * th0) / dth2;

  ModesCondition c;
  c.weight = model.spectral_weight();
  c.rhs_weight = -16.0 * log_a / (th0 * horizon) * std::max(lead, 1.0) + 0.0;
  c.ratio = c.weight / (n1 * n1);
  c.rhs_ratio = -16.0 * (1.0 + rho) * (1.0 + rho) * th0 * dth2 * log_a /
                    (rho * rho * std::pow(hyp.sum(), 4) * horizon) +
                0.0;
  c.satisfied = c.weight_slack() >= 0.0 && c.ratio_slack() >= 0.0;

  if (!c.satisfied) {
    if (c.ratio_slack() < 0.0 && model.beta() / model.dimension() <= 0.5) {
      c.diagnostic =
          "M/(N+1)^2 stays bounded for beta/d <= 1/2; adding modes may never satisfy the "
          "second condition";
    } else if (c.ratio_slack() < 0.0 && c.weight_slack() < 0.0) {
      c.diagnostic = "both conditions fail; increase N or T";
    } else if (c.ratio_slack() < 0.0) {
      c.diagnostic = "M/(N+1)^2 below requirement; increase N or T";
    } else {
      c.diagnostic = "M below requirement; increase N or T";
    }
  }
  return c;
}

Type2Bound type2_bound(double horizon, double spectral_weight, const Hypotheses& hyp, double rho) {
  if (!(horizon >= 0.0) || !(spectral_weight > 0.0)) {
    throw DomainError("type2_bound: T must be non-negative and M positive");
  }
  const double rate = hyp.gap() * hyp.gap() * spectral_weight / (16.0 * hyp.theta0 * hyp.theta0);
  Type2Bound b;
  b.exponential = std::exp(-rate * horizon);
  b.bound = (1.0 + rho) * b.exponential;
  return b;
}

SharpThreshold sharp_threshold(double alpha, double horizon, const ModelParams& model,
                               const Hypotheses& hyp) {
  if (!(horizon > 0.0)) throw DomainError("horizon T must be positive");
  const double q = normal_quantile(alpha);
  const double th0 = hyp.theta0;
  const double MT = model.spectral_weight() * horizon;
  SharpThreshold s;
  s.log_c_sharp = -hyp.gap() * hyp.gap() * MT / (4.0 * th0) -
                  hyp.sq_gap() / (2.0 * th0) * std::sqrt(MT / (2.0 * th0)) * q;
  s.statistic_threshold = -model.sigma() * q * std::sqrt(model.spectral_weight() / (2.0 * th0));
  return s;
}

}  // namespace spde_lrt
