#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "igbot/matrix.hpp"
#include "igbot/model_spec.hpp"

namespace igbot {

struct Kernel {
  KernelType type = KernelType::poly;
  int degree = 5;
  double gamma = 1.0;
  double coef0 = 1.5;

  double operator()(std::span<const double> a, std::span<const double> b) const;
};

struct SmoOptions {
  double c = 1.0;
  double tolerance = 1e-3;
  std::size_t max_iterations = 0;  // 0: max(10'000'000, 100 n)
};

struct SmoResult {
  std::vector<double> alpha;  // dual variables, one per training row
  double bias = 0.0;          // f(x) = sum alpha_i y_i K(x_i, x) + bias
  std::size_t iterations = 0;
  bool converged = false;
};

// C-SVC dual by sequential minimal optimization: two-variable analytic steps
// on the working pair chosen by second-order gain. `y` holds class ids
// (kBot maps to +1, kGenuine to -1). Stops when the maximal KKT violation is
// below tolerance.
SmoResult solve_smo(const Matrix& x, std::span<const int> y, const Kernel& kernel,
                    const SmoOptions& options);

struct PlattParams {
  double a = 0.0;
  double b = 0.0;
};

// Fits p(bot | f) = 1 / (1 + exp(a f + b)) by Newton's method with
// backtracking on the smoothed-target negative log-likelihood. Throws
// std::invalid_argument when only one class is present.
PlattParams platt_fit(std::span<const double> decision_values, std::span<const int> y);
double platt_probability(const PlattParams& p, double decision_value);

class SvmClassifier {
 public:
  static SvmClassifier fit(const SvmParams& params, const Matrix& x, std::span<const int> y,
                           std::uint64_t seed);

  double decision_value(std::span<const double> row) const;
  double prob_bot(std::span<const double> row) const;

  const Kernel& kernel() const { return kernel_; }
  const Matrix& support_vectors() const { return support_; }
  const std::vector<double>& dual_coef() const { return coef_; }  // alpha_i * y_i
  double bias() const { return bias_; }
  const PlattParams& platt() const { return platt_; }
  bool probabilistic() const { return probabilistic_; }

  nlohmann::ordered_json to_json() const;
  static SvmClassifier from_json(const nlohmann::json& j);

 private:
  Kernel kernel_;
  Matrix support_;
  std::vector<double> coef_;
  double bias_ = 0.0;
  PlattParams platt_;
  bool probabilistic_ = true;
};

// Scale-style default gamma: 1 / (n_features * variance of all entries).
double scale_gamma(const Matrix& x);

}  // namespace igbot
