#include "igbot/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "igbot/random.hpp"

namespace igbot {

SammeStep samme_round(std::span<const double> weights, std::span<const int> predictions,
                      std::span<const int> y, int n_classes, double learning_rate) {
  if (weights.size() != y.size() || predictions.size() != y.size()) {
    throw std::invalid_argument("samme_round: length mismatch");
  }
  if (n_classes < 2) throw std::invalid_argument("samme_round: n_classes must be >= 2");
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::abs(total - 1.0) > 1e-6) throw std::invalid_argument("samme_round: weights must sum to 1");

  SammeStep step;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (predictions[i] != y[i]) step.error += weights[i];
  }
  const double err = std::clamp(step.error, 1e-10, 1.0 - 1e-10);
  step.alpha = learning_rate * (std::log((1.0 - err) / err) + std::log(n_classes - 1.0));

  step.weights.assign(weights.begin(), weights.end());
  const double boost = std::exp(step.alpha);
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (predictions[i] != y[i]) step.weights[i] *= boost;
    sum += step.weights[i];
  }
  for (double& w : step.weights) w /= sum;
  return step;
}

AdaBoostSamme AdaBoostSamme::fit(const AdaBoostParams& params, const Matrix& x,
                                 std::span<const int> y, std::uint64_t seed) {
  if (x.rows() == 0) throw std::invalid_argument("adaboost: empty input");
  AdaBoostSamme model;
  model.n_features_ = x.cols();
  TreeOptions stump;
  stump.criterion = Criterion::gini;
  stump.splitter = Splitter::best;
  stump.max_depth = 1;

  std::vector<double> w(x.rows(), 1.0 / static_cast<double>(x.rows()));
  Labels pred(x.rows());
  for (int m = 0; m < params.n_estimators; ++m) {
    Rng rng(unit_seed(seed, static_cast<std::uint64_t>(m)));
    auto tree = DecisionTree::fit(x, y, w, stump, rng);
    for (std::size_t i = 0; i < x.rows(); ++i) pred[i] = stump_vote(tree, x.row(i));
    auto step = samme_round(w, pred, y, 2, params.learning_rate);

    // A learner no better than chance adds nothing; keep it only if the
    // ensemble would otherwise be empty.
    if (step.error >= 0.5) {
      if (model.stumps_.empty()) {
        model.stumps_.push_back(std::move(tree));
        model.alphas_.push_back(0.0);
        model.errors_.push_back(step.error);
      }
      break;
    }
    model.stumps_.push_back(std::move(tree));
    model.alphas_.push_back(step.alpha);
    model.errors_.push_back(step.error);
    if (step.error <= 0.0) break;
    w = std::move(step.weights);
  }
  return model;
}

double AdaBoostSamme::prob_bot(std::span<const double> row) const {
  double bot = 0.0, total = 0.0;
  for (std::size_t m = 0; m < stumps_.size(); ++m) {
    total += alphas_[m];
    if (stump_vote(stumps_[m], row) == kBot) bot += alphas_[m];
  }
  return total > 0.0 ? bot / total : 0.5;
}

std::vector<Labels> AdaBoostSamme::staged_predict(const Matrix& x) const {
  std::vector<Labels> stages;
  std::vector<double> bot(x.rows(), 0.0), total(x.rows(), 0.0);
  for (std::size_t m = 0; m < stumps_.size(); ++m) {
    Labels labels(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
      total[i] += alphas_[m];
      if (stump_vote(stumps_[m], x.row(i)) == kBot) bot[i] += alphas_[m];
      const double p = total[i] > 0.0 ? bot[i] / total[i] : 0.5;
      labels[i] = p > 1.0 - p ? kBot : kGenuine;
    }
    stages.push_back(std::move(labels));
  }
  return stages;
}

std::vector<double> AdaBoostSamme::importance() const {
  std::vector<double> imp(n_features_, 0.0);
  double weight = 0.0;
  for (std::size_t m = 0; m < stumps_.size(); ++m) {
    const auto t = stumps_[m].importance();
    for (std::size_t f = 0; f < imp.size(); ++f) imp[f] += alphas_[m] * t[f];
    weight += alphas_[m];
  }
  double sum = 0.0;
  for (double v : imp) sum += v;
  if (weight > 0.0 && sum > 0.0) {
    for (double& v : imp) v /= sum;
  } else {
    std::fill(imp.begin(), imp.end(), 0.0);
  }
  return imp;
}

AdaBoostSamme AdaBoostSamme::from_members(std::vector<DecisionTree> stumps,
                                          std::vector<double> alphas) {
  if (stumps.size() != alphas.size() || stumps.empty()) {
    throw std::invalid_argument("adaboost: members and alphas must be non-empty and aligned");
  }
  AdaBoostSamme m;
  m.n_features_ = stumps.front().n_features();
  m.errors_.assign(stumps.size(), 0.0);
  m.stumps_ = std::move(stumps);
  m.alphas_ = std::move(alphas);
  return m;
}

nlohmann::ordered_json AdaBoostSamme::to_json() const {
  nlohmann::ordered_json j;
  j["alphas"] = alphas_;
  j["errors"] = errors_;
  auto& arr = j["stumps"] = nlohmann::ordered_json::array();
  for (const auto& s : stumps_) arr.push_back(s.to_json());
  return j;
}

AdaBoostSamme AdaBoostSamme::from_json(const nlohmann::json& j) {
  std::vector<DecisionTree> stumps;
  for (const auto& s : j.at("stumps")) stumps.push_back(DecisionTree::from_json(s));
  auto m = from_members(std::move(stumps), j.at("alphas").get<std::vector<double>>());
  m.errors_ = j.at("errors").get<std::vector<double>>();
  return m;
}

}  // namespace igbot
