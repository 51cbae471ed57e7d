#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "spde_lrt/model.hpp"
#include "spde_lrt/normal.hpp"
#include "spde_lrt/sld.hpp"

namespace spde_lrt {

enum class ErrorKind { type1, type2 };

std::string_view to_string(ErrorKind k);

// Rejection level calibrated so that the dominant factor exp(-I_0(level) s) equals alpha.
// Time regime: level = eta, s = T, w = M. Mode regime: level = zeta, s = M, w = T.
struct CalibratedLevel {
  double level = 0.0;
  double delta = 0.0;  // level minus the left endpoint -(dtheta)^2 w / (4 theta0)
  Regime regime = Regime::time;
};

CalibratedLevel calibrated_level(double alpha, double scale, double weight, const Hypotheses& hyp,
                                 Regime regime);

// eta* for horizon T.
CalibratedLevel time_level(double alpha, double horizon, const ModelParams& model,
                           const Hypotheses& hyp);

// zeta* for the model's M at fixed horizon T.
CalibratedLevel mode_level(double alpha, double horizon, const ModelParams& model,
                           const Hypotheses& hyp);

// Minimal horizon guaranteeing the Type I (or Type II) bound; the max of three terms.
struct HorizonBound {
  std::array<double, 3> terms{};
  double exact = 0.0;
  std::int64_t rounded = 0;  // nearest integer, as tabulated
};

struct HorizonRequirement {
  HorizonBound type1;
  HorizonBound type2;
};

HorizonBound min_time(double alpha, double rho, std::size_t n_modes, double spectral_weight,
                      const Hypotheses& hyp, ErrorKind kind);

HorizonRequirement horizon_requirement(double alpha, double rho, std::size_t n_modes,
                                       double spectral_weight, const Hypotheses& hyp);

// The two mode-count inequalities for a fixed horizon T:
//   M >= rhs_weight   and   M / (N + 1)^2 >= rhs_ratio.
struct ModesCondition {
  double weight = 0.0;
  double rhs_weight = 0.0;
  double ratio = 0.0;
  double rhs_ratio = 0.0;
  bool satisfied = false;
  std::string diagnostic;

  double weight_slack() const { return weight - rhs_weight; }
  double ratio_slack() const { return ratio - rhs_ratio; }
};

ModesCondition modes_condition(double alpha, double rho, double horizon, const ModelParams& model,
                               const Hypotheses& hyp, ErrorKind kind);

struct Type2Bound {
  double bound = 0.0;        // (1 + rho) * exponential
  double exponential = 0.0;  // exp(-(dtheta)^2 M T / (16 theta0^2))
};

Type2Bound type2_bound(double horizon, double spectral_weight, const Hypotheses& hyp, double rho);

struct SharpThreshold {
  double log_c_sharp = 0.0;          // log of the asymptotically most powerful constant
  double statistic_threshold = 0.0;  // same test in terms of the normalised statistic S_T
};

SharpThreshold sharp_threshold(double alpha, double horizon, const ModelParams& model,
                               const Hypotheses& hyp);

}  // namespace spde_lrt
