#include "doctest.h"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "spde_lrt/error.hpp"
#include "spde_lrt/normal.hpp"

using namespace spde_lrt;

TEST_CASE("normal quantile agrees with boost across the range") {
  const boost::math::normal_distribution<double> nd;
  double worst = 0.0;
  for (double e = -300.0; e <= -0.5; e += 0.37) {
    const double p = std::pow(10.0, e);
    for (double q : {p, 1.0 - p}) {
      if (!(q > 0.0 && q < 1.0)) continue;
      const double ref = boost::math::quantile(nd, q);
      worst = std::max(worst, std::fabs(normal_quantile(q) - ref) / std::max(1.0, std::fabs(ref)));
    }
  }
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    const double ref = boost::math::quantile(nd, p);
    worst = std::max(worst, std::fabs(normal_quantile(p) - ref) / std::max(1.0, std::fabs(ref)));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("normal quantile known values and symmetry") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.05) == doctest::Approx(-1.6448536269514722).epsilon(1e-15));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-15));
  for (double p : {0x1p-30, 0.001, 0.2, 0.4}) {
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
}

TEST_CASE("normal cdf agrees with boost and inverts the quantile") {
  const boost::math::normal_distribution<double> nd;
  for (double x = -37.0; x <= 8.0; x += 0.25) {
    CHECK(normal_cdf(x) == doctest::Approx(boost::math::cdf(nd, x)).epsilon(1e-14));
  }
  for (double p : {1e-12, 0.01, 0.3, 0.77, 0.999}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-13));
  }
}
