#pragma once

namespace spde_lrt {

// Standard normal distribution function.
double normal_cdf(double x);

// Inverse of normal_cdf. Rational initial guess refined by one Halley step
// against erfc; absolute error below 1e-9 on [1e-8, 1 - 1e-8].
// Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);

}  // namespace spde_lrt
