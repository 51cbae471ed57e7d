#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spde_lrt {

// Simple pair of drift values under test, theta1 > theta0 > 0.
struct Hypotheses {
  double theta0 = 0.0;
  double theta1 = 0.0;

  static Hypotheses make(double theta0, double theta1);

  double theta(int j) const { return j == 0 ? theta0 : theta1; }
  double gap() const { return theta1 - theta0; }
  double sq_gap() const { return theta1 * theta1 - theta0 * theta0; }
  double sum() const { return theta1 + theta0; }

  friend bool operator==(const Hypotheses&, const Hypotheses&) = default;
};

// Significance level and the relative tolerance on top of it.
struct TestLevel {
  double alpha = 0.05;
  double rho = 0.1;

  static TestLevel make(double alpha, double rho);

  friend bool operator==(const TestLevel&, const TestLevel&) = default;
};

enum class Basis { power, explicit_list };

std::string_view to_string(Basis b);
Basis parse_basis(std::string_view s);

// Where the Laplacian eigenvalues come from. The power basis gives
// lambda_k = k^(1/d), which is exact (lambda_k = k) for d = 1 on [0, pi].
struct EigenvalueSource {
  Basis basis = Basis::power;
  std::vector<double> values;

  static EigenvalueSource power_law() { return {}; }
  static EigenvalueSource explicit_list(std::vector<double> v) {
    return {Basis::explicit_list, std::move(v)};
  }
};

// Per-mode weights used by the simulator and the statistics.
struct ModeWeights {
  double lambda = 0.0;
  double drift = 0.0;      // lambda^{2 beta}
  double noise = 0.0;      // lambda^{-gamma}
  double x_weight = 0.0;   // lambda^{2 beta + 2 gamma}
  double y_weight = 0.0;   // lambda^{2 beta + gamma}
  double q_weight = 0.0;   // lambda^{4 beta + 2 gamma}

  friend bool operator==(const ModeWeights&, const ModeWeights&) = default;
};

// Spectral model of the fractional stochastic heat equation observed
// through its first N Fourier modes. Immutable once built.
class ModelParams {
 public:
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double sigma() const { return sigma_; }
  int dimension() const { return d_; }
  Basis basis() const { return basis_; }
  std::size_t modes() const { return eigenvalues_.size(); }
  std::span<const double> eigenvalues() const { return eigenvalues_; }
  std::span<const double> initial() const { return u0_; }
  std::span<const ModeWeights> weights() const { return weights_; }

  // M = sum_k lambda_k^{2 beta}
  double spectral_weight() const { return spectral_weight_; }

  // lambda_N^{2 beta}, the stiffest mode.
  double max_drift() const { return weights_.back().drift; }

  bool nonzero_initial() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  friend ModelParams build_model(double, double, double, int, std::size_t,
                                 const EigenvalueSource&, std::vector<double>);

  double beta_ = 1.0;
  double gamma_ = 0.0;
  double sigma_ = 1.0;
  int d_ = 1;
  Basis basis_ = Basis::power;
  std::vector<double> eigenvalues_;
  std::vector<double> u0_;
  std::vector<ModeWeights> weights_;
  double spectral_weight_ = 0.0;
};

// Throws DomainError on invalid ranges or a decreasing user eigenvalue list.
// An empty u0 means the zero initial condition.
ModelParams build_model(double beta, double gamma, double sigma, int d, std::size_t n_modes,
                        const EigenvalueSource& source = EigenvalueSource::power_law(),
                        std::vector<double> u0 = {});

// The numerical-experiment model: beta = d = sigma = 1, gamma = 0, lambda_k = k.
ModelParams reference_model(std::size_t n_modes);

// Flat key/value serialization:
//   beta, gamma, sigma, d, N, basis = "power" | "explicit", eigenvalues = [...], u0 = [...]
std::string to_config(const ModelParams& model);
ModelParams model_from_config(std::string_view text);

// Uniform time grid 0 = t_0 < ... < t_n = T.
class TimeGrid {
 public:
  static TimeGrid make(double horizon, std::int64_t steps);

  // Smallest n with T/n <= max_step.
  static TimeGrid with_max_step(double horizon, double max_step);

  double horizon() const { return horizon_; }
  std::int64_t steps() const { return steps_; }
  double dt() const { return dt_; }
  double t(std::int64_t i) const { return horizon_ * static_cast<double>(i) / static_cast<double>(steps_); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_ = 1.0;
  std::int64_t steps_ = 1;
  double dt_ = 1.0;
};

// Margin used when a grid is chosen automatically: theta1 * lambda_N^{2 beta} * dt <= 0.1.
inline constexpr double kAutoStabilityMargin = 0.1;

// theta * lambda_N^{2 beta} * dt
double stability_number(const ModelParams& model, const TimeGrid& grid, double theta);

// Steps needed so that theta * lambda_N^{2 beta} * T / n <= margin.
std::int64_t steps_for_margin(const ModelParams& model, double horizon, double theta, double margin);

// Grid satisfying the automatic margin for theta1, refined further when
// max_step is smaller than the margin-implied step.
TimeGrid stable_grid(const ModelParams& model, const Hypotheses& hyp, double horizon,
                     std::optional<double> max_step = std::nullopt,
                     double margin = kAutoStabilityMargin);

}  // namespace spde_lrt
