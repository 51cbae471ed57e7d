#include "doctest.h"

#include <cmath>
#include <vector>

#include "spde_lrt/error.hpp"
#include "spde_lrt/montecarlo.hpp"
#include "spde_lrt/sim.hpp"

using namespace spde_lrt;

namespace {

const Hypotheses kHyp{0.1, 0.2};

struct ZeroNoise {
  double next_normal() { return 0.0; }
};

// Remembers every deviate it hands out.
struct Recording {
  NormalStream inner;
  std::vector<double> drawn;
  double next_normal() {
    drawn.push_back(inner.next_normal());
    return drawn.back();
  }
};

TrialStats simulate(const ModelParams& m, const TimeGrid& g, double theta, std::uint64_t trial) {
  NormalStream s(123, trial);
  return simulate_trial(m, g, theta, s);
}

}  // namespace

TEST_CASE("zero noise from the origin stays at the origin") {
  ZeroNoise z;
  const TrialStats s = simulate_trial(reference_model(3), TimeGrid::make(10.0, 100), 0.1, z);
  CHECK(s.X == 0.0);
  CHECK(s.Y == 0.0);
  CHECK(s.Dstat == 0.0);
  CHECK(s.Q == 0.0);
}

TEST_CASE("zero noise from u0 = c follows the geometric recursion") {
  const double c = 1.7, theta = 0.3;
  const ModelParams m = build_model(1.0, 0.0, 1.0, 1, 1, EigenvalueSource::explicit_list({2.0}), {c});
  const TimeGrid g = TimeGrid::make(5.0, 400);
  ZeroNoise z;
  const TrialStats s = simulate_trial(m, g, theta, z);
  // lambda = 2, beta = 1: drift 4, X weight 4, Q weight 16.
  const long double a = 1.0L - theta * 4.0L * g.dt();
  long double geo = 0.0L, pw = 1.0L;
  for (int i = 0; i < 400; ++i) {
    geo += pw;
    pw *= a * a;
  }
  const long double cc = static_cast<long double>(c) * c;
  CHECK(s.X == doctest::Approx(static_cast<double>(4.0L * cc * pw)).epsilon(1e-12));
  CHECK(s.Dstat == doctest::Approx(static_cast<double>(4.0L * (a - 1.0L) * cc * geo)).epsilon(1e-12));
  CHECK(s.Q == doctest::Approx(static_cast<double>(16.0L * cc * geo * g.dt())).epsilon(1e-12));
  CHECK(s.Y == 0.0);
  CHECK(mle(s) == doctest::Approx(theta).epsilon(1e-13));
}

TEST_CASE("zero-noise MLE is exact for several modes and grids") {
  for (std::int64_t n : {30, 333, 5000}) {
    const ModelParams m = build_model(1.0, 0.5, 1.0, 1, 3, {}, {0.4, -1.0, 2.0});
    ZeroNoise z;
    const TrialStats s = simulate_trial(m, TimeGrid::make(10.0, n), 0.2, z);
    CHECK(mle(s) == doctest::Approx(0.2).epsilon(1e-13));
  }
}

TEST_CASE("degenerate MLE is reported") {
  CHECK_THROWS_AS(mle(TrialStats{}), DegenerateError);
}

TEST_CASE("unstable grids are refused with the required n") {
  const ModelParams m = reference_model(10);
  try {
    ZeroNoise z;
    simulate_trial(m, TimeGrid::make(1.0, 10), 0.2, z);
    FAIL("expected StabilityError");
  } catch (const StabilityError& e) {
    CHECK(e.required_steps() == 21);
    ZeroNoise z;
    CHECK_NOTHROW(simulate_trial(m, TimeGrid::make(1.0, e.required_steps()), 0.2, z));
  }
}

TEST_CASE("log likelihood ratio on all-zero statistics") {
  const ModelParams m = reference_model(3);
  const TimeGrid g = TimeGrid::make(100.0, 5000);
  TrialStats zero;
  zero.theta_sim = kHyp.theta0;
  CHECK(log_lr(zero, kHyp, m, g, Route::direct) == 0.0);
  CHECK(log_lr(zero, kHyp, m, g, Route::ito) == doctest::Approx(-0.01 * 14.0 * 100.0 / 0.4).epsilon(1e-14));
}

TEST_CASE("ito route needs a zero initial condition") {
  const ModelParams m = build_model(1.0, 0.0, 1.0, 1, 2, {}, {1.0, 0.0});
  TrialStats s;
  s.theta_sim = 0.1;
  CHECK_THROWS_AS(log_lr(s, kHyp, m, TimeGrid::make(1.0, 100), Route::ito), DomainError);
  CHECK_NOTHROW(log_lr(s, kHyp, m, TimeGrid::make(1.0, 100), Route::direct));
}

TEST_CASE("route names") {
  CHECK(parse_route("A") == Route::ito);
  CHECK(parse_route("direct") == Route::direct);
  CHECK_THROWS_AS(parse_route("C"), DomainError);
  CHECK(parse_test_kind(to_string(TestKind::rt_sharp)) == TestKind::rt_sharp);
  CHECK_THROWS_AS(parse_test_kind("rnsharp"), DomainError);
}

TEST_CASE("decisions on all-zero statistics and regime checks") {
  const ModelParams m = reference_model(3);
  const TimeGrid g = TimeGrid::make(100.0, 5000);
  TrialStats zero;
  zero.theta_sim = kHyp.theta0;
  const DecisionLevels rt = decision_levels(TestKind::rt0, 0.05, m, g, kHyp);
  CHECK(rt.calibrated.delta > 0.0);
  CHECK_FALSE(decide(TestKind::rt0, zero, rt, m, g, kHyp));
  CHECK_FALSE(decide(TestKind::rt_sharp, zero, rt, m, g, kHyp));
  CHECK_THROWS_AS(decide(TestKind::rn0, zero, rt, m, g, kHyp), DomainError);
  const DecisionLevels rn = decision_levels(TestKind::rn0, 0.05, m, g, kHyp);
  CHECK_THROWS_AS(decide(TestKind::rt0, zero, rn, m, g, kHyp), DomainError);
  CHECK_FALSE(decide(TestKind::rn0, zero, rn, m, g, kHyp));
}

TEST_CASE("statistic form and likelihood form of the decision agree under the null") {
  const ModelParams m = reference_model(3);
  const TimeGrid g = TimeGrid::make(100.0, 1000);
  const double T = g.horizon();
  const double M = m.spectral_weight();
  int rejections = 0;
  for (TestKind test : {TestKind::rt0, TestKind::rt_sharp, TestKind::rn0}) {
    const DecisionLevels lv = decision_levels(test, 0.3, m, g, kHyp);
    const double cut = test == TestKind::rt0   ? lv.calibrated.level * T
                       : test == TestKind::rn0 ? lv.calibrated.level * M
                                               : lv.sharp.log_c_sharp;
    for (std::uint64_t j = 0; j < 3000; ++j) {
      const TrialStats s = simulate(m, g, kHyp.theta0, j);
      const double l = log_lr(s, kHyp, m, g, Route::ito);
      const bool by_statistic = decide(test, s, lv, m, g, kHyp, Route::ito);
      rejections += by_statistic ? 1 : 0;
      // Only trials sitting within rounding distance of the cut may disagree.
      if (std::fabs(l - cut) > 1e-9 * (std::fabs(cut) + 1.0)) {
        REQUIRE(by_statistic == (l >= cut));
      }
    }
  }
  CHECK(rejections > 100);
}

TEST_CASE("one-pass accumulation equals a stored two-pass recomputation") {
  const ModelParams m = build_model(1.0, 0.5, 0.7, 1, 4);
  const TimeGrid g = TimeGrid::make(20.0, 4000);
  const double theta = 0.15;
  Recording rec{NormalStream(5, 9), {}};
  const TrialStats one = simulate_trial(m, g, theta, rec);

  const auto n = static_cast<std::size_t>(g.steps());
  const double sdt = std::sqrt(g.dt());
  CompensatedSum X, Y, D, Q;
  for (std::size_t k = 0; k < m.modes(); ++k) {
    const ModeWeights& w = m.weights()[k];
    std::vector<double> u(n + 1, 0.0), xi(n);
    for (std::size_t i = 0; i < n; ++i) {
      xi[i] = sdt * rec.drawn[k * n + i];
      u[i + 1] = u[i] - theta * w.drift * u[i] * g.dt() + m.sigma() * w.noise * xi[i];
    }
    CompensatedSum cross, incr, energy;
    for (std::size_t i = 0; i < n; ++i) {
      cross.add(u[i] * xi[i]);
      incr.add(u[i] * (u[i + 1] - u[i]));
      energy.add(u[i] * u[i]);
    }
    X.add(w.x_weight * u[n] * u[n]);
    Y.add(w.y_weight * cross.value());
    D.add(w.x_weight * incr.value());
    Q.add(w.q_weight * energy.value() * g.dt());
  }
  CHECK(one.X == doctest::Approx(X.value()).epsilon(1e-10));
  CHECK(one.Y == doctest::Approx(Y.value()).epsilon(1e-10));
  CHECK(one.Dstat == doctest::Approx(D.value()).epsilon(1e-10));
  CHECK(one.Q == doctest::Approx(Q.value()).epsilon(1e-10));
  CHECK(rec.drawn.size() == m.modes() * n);
}

TEST_CASE("mean log likelihood ratio under the null is not positive") {
  const ModelParams m = reference_model(3);
  const TimeGrid g = TimeGrid::make(10.0, 500);
  const std::vector<double> l = map_trials(100000, 0, [&](std::int64_t j) {
    return log_lr(simulate(m, g, kHyp.theta0, static_cast<std::uint64_t>(j)), kHyp, m, g);
  });
  CompensatedSum s;
  for (double x : l) s.add(x);
  const double mean = s.value() / l.size();
  CompensatedSum ss;
  for (double x : l) ss.add((x - mean) * (x - mean));
  const double se = std::sqrt(ss.value() / (l.size() - 1) / l.size());
  CHECK(mean <= 3.0 * se);
}

TEST_CASE("MLE spread matches the asymptotic variance 2 theta / (M T)") {
  const ModelParams m = reference_model(3);
  const TimeGrid g = TimeGrid::make(100.0, 5000);
  const double theta = 0.1;
  const int trials = 2000;
  const std::vector<double> est = map_trials(trials, 0, [&](std::int64_t j) {
    return mle(simulate(m, g, theta, 100000 + static_cast<std::uint64_t>(j)));
  });
  double mean = 0.0;
  for (double e : est) mean += e;
  mean /= trials;
  double var = 0.0;
  int within = 0;
  for (double e : est) {
    var += (e - mean) * (e - mean);
    within += std::fabs(e - theta) < 0.02 ? 1 : 0;
  }
  var /= trials - 1;
  const double asym = 2.0 * theta / (14.0 * 100.0);
  CHECK(var == doctest::Approx(asym).epsilon(0.15));
  CHECK(std::fabs(mean - theta) < 4.0 * std::sqrt(asym / trials) + 2e-3);
  // P(|Z| < 0.02 / sd) for the asymptotic normal law is about 0.906.
  const double p = std::erf(0.02 / std::sqrt(asym) / std::sqrt(2.0));
  CHECK(std::fabs(double(within) / trials - p) < 4.0 * std::sqrt(p * (1 - p) / trials));
}
