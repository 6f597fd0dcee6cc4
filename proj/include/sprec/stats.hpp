#pragma once

#include <cstdint>

namespace sprec::stats {

double normal_cdf(double x);

/// Phi^{-1}(u) for u in (0, 1): rational approximation refined by one Halley
/// step against erfc. Absolute error below 1e-10 over the double range.
double normal_quantile(double u);

/// Phi^{-1}(1 - tail) computed without forming 1 - tail.
double normal_upper_quantile(double tail);

double binomial_coefficient(unsigned n, unsigned k);

}  // namespace sprec::stats
