#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "igbot/matrix.hpp"
#include "igbot/model_spec.hpp"
#include "igbot/tree.hpp"

namespace igbot {

struct SammeStep {
  double alpha = 0.0;
  double error = 0.0;  // weighted error before clamping
  std::vector<double> weights;
};

// One SAMME reweighting step. err = sum of weights on misclassified rows,
// clamped to [1e-10, 1 - 1e-10]; alpha = lr * (ln((1-err)/err) + ln(K-1));
// misclassified weights scale by exp(alpha) and the result is renormalized.
// Throws std::invalid_argument when weights do not sum to 1 within 1e-6.
SammeStep samme_round(std::span<const double> weights, std::span<const int> predictions,
                      std::span<const int> y, int n_classes, double learning_rate);

// Discrete SAMME over depth-1 Gini stumps. The bot probability is the
// alpha-weighted share of stumps voting bot.
class AdaBoostSamme {
 public:
  static AdaBoostSamme fit(const AdaBoostParams& params, const Matrix& x, std::span<const int> y,
                           std::uint64_t seed);

  double prob_bot(std::span<const double> row) const;

  // Ensemble predictions after each boosting round (1..size()).
  std::vector<Labels> staged_predict(const Matrix& x) const;

  // Alpha-weighted mean of per-stump importances, normalized.
  std::vector<double> importance() const;

  std::size_t size() const { return stumps_.size(); }
  const std::vector<DecisionTree>& stumps() const { return stumps_; }
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& errors() const { return errors_; }

  nlohmann::ordered_json to_json() const;
  static AdaBoostSamme from_json(const nlohmann::json& j);

  // Builds an ensemble from explicit members (used for inspection and tests).
  static AdaBoostSamme from_members(std::vector<DecisionTree> stumps, std::vector<double> alphas);

 private:
  std::vector<DecisionTree> stumps_;
  std::vector<double> alphas_;
  std::vector<double> errors_;
  std::size_t n_features_ = 0;
};

inline int stump_vote(const DecisionTree& stump, std::span<const double> row) {
  return stump.prob_bot(row) > 0.5 ? kBot : kGenuine;
}

}  // namespace igbot
