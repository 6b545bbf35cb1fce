#pragma once

#include <span>

namespace igbot {

double mean(std::span<const double> v);
// Unbiased (n - 1) variance; 0 for fewer than two values.
double sample_variance(std::span<const double> v);
double population_variance(std::span<const double> v);

// Standard normal CDF and its upper tail 1 - Phi(z), both via erfc so tails
// keep full relative precision.
double normal_cdf(double z);
double normal_upper_tail(double z);
// Inverse standard normal CDF. p must lie in (0, 1).
double normal_quantile(double p);

}  // namespace igbot
