#include "igbot/stats.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace igbot {

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

namespace {

// Deviations are taken from the first value so that a constant sample has
// exactly zero spread.
double sum_sq_dev(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double shift = v.front();
  double m = 0.0;
  for (double x : v) m += x - shift;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - shift - m) * (x - shift - m);
  return s;
}

}  // namespace

double sample_variance(std::span<const double> v) {
  return v.size() < 2 ? 0.0 : sum_sq_dev(v) / static_cast<double>(v.size() - 1);
}

double population_variance(std::span<const double> v) {
  return v.empty() ? 0.0 : sum_sq_dev(v) / static_cast<double>(v.size());
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace igbot
