#pragma once

#include "spde_lrt/model.hpp"

// Sharp large-deviation quantities for the log-likelihood ratio ln L(theta0, theta1).
//
// With b_j(eps) = sqrt(theta_j^2 + (theta1^2 - theta0^2) eps), the scaled log-MGF of
// eps * ln L under theta_j splits exactly into
//   T^{-1} ln E_j[L^eps] = M L_j(eps) + T^{-1} N H_j(eps) + T^{-1} R_j(eps)
// (time scaling) or the same with T and M exchanged (mode scaling).

namespace spde_lrt {

enum class Regime { time, mode };

std::string_view to_string(Regime r);

struct GfComponents {
  double L = 0.0;  // leading term
  double D = 1.0;  // (theta_j + dtheta eps) / b_j(eps)
  double H = 0.0;  // -1/2 ln((1 + D) / 2)
};

struct TiltPoint {
  double epsilon = 0.0;
  int hypothesis_index = 0;
};

// eps must exceed this for the square root to be real.
double epsilon_lower_bound(int j, const Hypotheses& hyp);

GfComponents gf_components(double epsilon, int j, const Hypotheses& hyp);

// Derivative of L_j with respect to eps.
double gf_leading_derivative(double epsilon, int j, const Hypotheses& hyp);

// R_j(eps) summed over the N modes of the model, compensated.
double residual_R(double epsilon, int j, const Hypotheses& hyp, const ModelParams& model,
                  double horizon);

// L_T^j (time) or L_N^j (mode).
double mgf_exponent(double epsilon, int j, const Hypotheses& hyp, const ModelParams& model,
                    double horizon, Regime scaling);

// Open interval of admissible levels: (-(dtheta)^2 w / (4 theta0), dtheta w / 2).
struct LevelInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x > lo && x < hi; }
};

LevelInterval admissible_levels(const Hypotheses& hyp, double weight);

// Tilt solving weight * L_j'(eps) = level. `weight` is M in the time regime and T in
// the mode regime. The left endpoint is accepted (it maps to eps = 0 for j = 0).
TiltPoint tilt_epsilon(double level, int j, const Hypotheses& hyp, double weight);

// I_j(level) with the same weight convention as tilt_epsilon.
double rate_function(double level, int j, const Hypotheses& hyp, double weight);

// ln A; A_T^j = exp(-I_j T) exp(N H_j + R_j) in the time regime,
// A_N^j = exp(-I~_j M) exp(N H_j + R_j) in the mode regime.
double log_a_factor(double level, int j, const Hypotheses& hyp, const ModelParams& model,
                    double horizon, Regime scale);

double a_factor(double level, int j, const Hypotheses& hyp, const ModelParams& model,
                double horizon, Regime scale);

}  // namespace spde_lrt
