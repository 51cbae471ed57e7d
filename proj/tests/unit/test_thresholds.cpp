#include "doctest.h"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "spde_lrt/error.hpp"
#include "spde_lrt/thresholds.hpp"

using namespace spde_lrt;

namespace {

const Hypotheses kHyp{0.1, 0.2};

}  // namespace

TEST_CASE("T_b1 reproduces the tabulated horizons") {
  const ModelParams m = reference_model(3);
  const double alphas[] = {0.1, 0.05, 0.01, 0.005};
  const std::int64_t printed[] = {629, 818, 1258, 1447};
  for (int i = 0; i < 4; ++i) {
    const HorizonBound b = min_time(alphas[i], 0.1, 3, m.spectral_weight(), kHyp, ErrorKind::type1);
    CHECK(b.rounded == printed[i]);
    CHECK(std::fabs(b.exact - static_cast<double>(printed[i])) <= 0.5);
  }
  CHECK(min_time(0.05, 0.1, 3, 14.0, kHyp, ErrorKind::type1).exact ==
        doctest::Approx(818.3051402610969).epsilon(1e-13));
}

TEST_CASE("min_time terms against a direct transcription") {
  const double th0 = 0.15, th1 = 0.4, M = 55.0, rho = 0.25, alpha = 0.02;
  const Hypotheses hyp{th0, th1};
  const double la = std::log(alpha);
  const double d2 = (th1 - th0) * (th1 - th0);
  const double third = -16 * (1 + rho) * (1 + rho) * th0 * d2 * 36.0 * la / (rho * rho * std::pow(th0 + th1, 4) * M);
  const HorizonBound t1 = min_time(alpha, rho, 5, M, hyp, ErrorKind::type1);
  const HorizonBound t2 = min_time(alpha, rho, 5, M, hyp, ErrorKind::type2);
  CHECK(t1.terms[0] == doctest::Approx(-256 * th0 * la / (d2 * M)));
  CHECK(t2.terms[0] == doctest::Approx(-16 * (th1 * th1 + 16 * th0 * th0) * la / (th0 * d2 * M)));
  CHECK(t1.terms[1] == doctest::Approx(-16 * la / (th0 * M)));
  CHECK(t1.terms[2] == doctest::Approx(third));
  CHECK(t1.exact == std::max({t1.terms[0], t1.terms[1], t1.terms[2]}));
}

TEST_CASE("alpha = 1 needs no observation time") {
  const HorizonBound b = min_time(1.0, 0.1, 3, 14.0, kHyp, ErrorKind::type1);
  CHECK(b.exact == 0.0);
  CHECK(b.rounded == 0);
  CHECK_FALSE(std::signbit(b.exact));
  CHECK_THROWS_AS(min_time(0.0, 0.1, 3, 14.0, kHyp, ErrorKind::type1), DomainError);
  CHECK_THROWS_AS(min_time(0.05, 0.0, 3, 14.0, kHyp, ErrorKind::type1), DomainError);
}

TEST_CASE("calibrated levels match the unrationalised closed forms") {
  const ModelParams m = reference_model(3);
  const double M = m.spectral_weight();
  const double P = kHyp.sq_gap();
  const double th0 = kHyp.theta0;
  for (double alpha : {0.1, 0.05, 0.001}) {
    for (double T : {1.0, 10.0, 100.0}) {
      const double la = std::log(alpha);
      // Delta eta = P ln(alpha)/(2 theta0^2 T) + P/(2 theta0^2) sqrt(-theta0 M ln(alpha)/T + ln^2(alpha)/T^2)
      const double d_eta = P * la / (2 * th0 * th0 * T) +
                           P / (2 * th0 * th0) * std::sqrt(-th0 * M * la / T + la * la / (T * T));
      const double d_zeta = P * la / (2 * th0 * th0 * M) +
                            P / (2 * th0 * th0) * std::sqrt(-th0 * T * la / M + la * la / (M * M));
      const CalibratedLevel eta = time_level(alpha, T, m, kHyp);
      const CalibratedLevel zeta = mode_level(alpha, T, m, kHyp);
      CHECK(eta.delta == doctest::Approx(d_eta).epsilon(1e-11));
      CHECK(zeta.delta == doctest::Approx(d_zeta).epsilon(1e-11));
      CHECK(eta.level == doctest::Approx(-0.01 * M / (4 * th0) + d_eta).epsilon(1e-11));
      CHECK(eta.regime == Regime::time);
      CHECK(zeta.regime == Regime::mode);
      CHECK(std::exp(-rate_function(eta.level, 0, kHyp, M) * T) == doctest::Approx(alpha).epsilon(1e-10));
      CHECK(std::exp(-rate_function(zeta.level, 0, kHyp, T) * M) == doctest::Approx(alpha).epsilon(1e-10));
    }
  }
}

TEST_CASE("calibrated level stays accurate for very long horizons") {
  const ModelParams m = reference_model(3);
  const CalibratedLevel eta = time_level(0.05, 1e9, m, kHyp);
  CHECK(eta.delta > 0.0);
  CHECK(std::exp(-rate_function(eta.level, 0, kHyp, 14.0) * 1e9) == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("sharp threshold") {
  const ModelParams m = reference_model(3);
  const boost::math::normal_distribution<double> nd;
  const double q = boost::math::quantile(nd, 0.05);
  const SharpThreshold s = sharp_threshold(0.05, 100.0, m, kHyp);
  CHECK(s.statistic_threshold == doctest::Approx(13.762).epsilon(1e-4));
  CHECK(s.statistic_threshold == doctest::Approx(-q * std::sqrt(14.0 / 0.2)).epsilon(1e-13));
  const double MT = 1400.0;
  CHECK(s.log_c_sharp == doctest::Approx(-0.01 * MT / 0.4 - 0.03 / 0.2 * std::sqrt(MT / 0.2) * q).epsilon(1e-13));
}

TEST_CASE("Type II bound") {
  for (double T : {10.0, 20.0, 60.0}) {
    const Type2Bound b = type2_bound(T, 14.0, kHyp, 0.1);
    CHECK(b.exponential == doctest::Approx(std::exp(-0.875 * T)).epsilon(1e-13));
    CHECK(b.bound == doctest::Approx(1.1 * b.exponential).epsilon(1e-13));
  }
}

TEST_CASE("mode conditions") {
  // beta = d = 1: M/(N+1)^2 grows like N/3, so enough modes satisfy both conditions.
  const ModesCondition ok = modes_condition(0.05, 0.1, 20.0, reference_model(200), kHyp, ErrorKind::type1);
  CHECK(ok.satisfied);
  CHECK(ok.diagnostic.empty());
  const ModesCondition few = modes_condition(0.05, 0.1, 1.0, reference_model(3), kHyp, ErrorKind::type1);
  CHECK_FALSE(few.satisfied);
  CHECK_FALSE(few.diagnostic.empty());
  // beta/d = 1/2: M/(N+1)^2 stays below 1/2 however many modes are added.
  const ModelParams flat = build_model(0.5, 0.0, 1.0, 1, 400);
  const ModesCondition bounded = modes_condition(0.05, 0.1, 1.0, flat, kHyp, ErrorKind::type1);
  CHECK_FALSE(bounded.satisfied);
  CHECK(bounded.diagnostic.find("bounded") != std::string::npos);
  CHECK(bounded.ratio < 0.5);
  const ModesCondition t2 = modes_condition(0.05, 0.1, 20.0, reference_model(200), kHyp, ErrorKind::type2);
  CHECK(t2.rhs_weight > ok.rhs_weight);
}
