#pragma once

namespace qhmcgp {

/// Standard normal CDF.
///
/// Hart's double-precision rational approximation (as arranged by West, 2005);
/// absolute error below 1e-14 over the real line.
double normal_cdf(double x);

/// Standard normal quantile for p in (0, 1).
///
/// Acklam's rational approximation (relative error 1.15e-9) followed by one
/// Halley step against normal_cdf, so normal_cdf(normal_quantile(p)) == p to
/// round-off.
double normal_quantile(double p);

}  // namespace qhmcgp
