#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "igbot/adaboost.hpp"
#include "igbot/ball_tree.hpp"
#include "igbot/matrix.hpp"
#include "igbot/model_spec.hpp"
#include "igbot/scaling.hpp"
#include "igbot/svm.hpp"
#include "igbot/tree.hpp"

namespace igbot {

class GaussianNB {
 public:
  static GaussianNB fit(const GnbParams& params, const Matrix& x, std::span<const int> y);
  double prob_bot(std::span<const double> row) const;

  const std::array<double, 2>& priors() const { return priors_; }
  const std::array<std::vector<double>, 2>& means() const { return means_; }
  const std::array<std::vector<double>, 2>& variances() const { return vars_; }

  nlohmann::ordered_json to_json() const;
  static GaussianNB from_json(const nlohmann::json& j);

 private:
  std::array<double, 2> priors_{};
  std::array<std::vector<double>, 2> means_;
  std::array<std::vector<double>, 2> vars_;
};

class KnnClassifier {
 public:
  static KnnClassifier fit(const KnnParams& params, const Matrix& x, std::span<const int> y);
  double prob_bot(std::span<const double> row) const;
  std::vector<Neighbor> neighbors(std::span<const double> row) const;

  const KnnParams& params() const { return params_; }
  const BallTree& tree() const { return tree_; }

  nlohmann::ordered_json to_json() const;
  static KnnClassifier from_json(const KnnParams& params, const nlohmann::json& j);

 private:
  KnnParams params_;
  BallTree tree_;  // also owns the training points for brute-force queries
  Labels labels_;
};

class RandomForest {
 public:
  static RandomForest fit(const ForestParams& params, const Matrix& x, std::span<const int> y,
                          std::uint64_t seed);
  double prob_bot(std::span<const double> row) const;
  std::vector<double> importance() const;

  const std::vector<DecisionTree>& trees() const { return trees_; }

  nlohmann::ordered_json to_json() const;
  static RandomForest from_json(const nlohmann::json& j);

 private:
  std::vector<DecisionTree> trees_;
};

TreeOptions tree_options(const DtreeParams& params);
TreeOptions tree_options(const ForestParams& params, std::size_t n_features);

using ModelState =
    std::variant<GaussianNB, KnnClassifier, DecisionTree, SvmClassifier, RandomForest, AdaBoostSamme>;

// A fitted, immutable model. Inputs are expected in the model's own feature
// space (standardized, columns in feature_names order); the optional scaling
// maps raw feature values into that space for scoring new accounts.
class TrainedModel {
 public:
  TrainedModel(ModelSpec spec, std::vector<std::string> feature_names,
               std::shared_ptr<const ModelState> state,
               std::optional<StandardizationParams> scaling = std::nullopt);

  const ModelSpec& spec() const { return spec_; }
  ModelKind kind() const { return spec_.kind(); }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const ModelState& state() const { return *state_; }
  const std::optional<StandardizationParams>& scaling() const { return scaling_; }
  TrainedModel with_scaling(StandardizationParams scaling) const;

  double prob_bot(std::span<const double> row) const;

 private:
  ModelSpec spec_;
  std::vector<std::string> feature_names_;
  std::shared_ptr<const ModelState> state_;
  std::optional<StandardizationParams> scaling_;
};

// Fits the model described by `spec`. Throws ConfigError for illegal
// hyperparameters and std::invalid_argument for unusable data.
TrainedModel fit(const ModelSpec& spec, const Matrix& x, std::span<const int> y, std::uint64_t seed,
                 std::vector<std::string> feature_names = {});

// Rows are [p_genuine, p_bot]. Throws std::invalid_argument on a column count
// mismatch.
std::vector<std::array<double, 2>> predict_proba(const TrainedModel& model, const Matrix& x);

// argmax of predict_proba; exact ties go to genuine.
Labels predict(const TrainedModel& model, const Matrix& x);

// Normalized impurity-decrease importances for dtree, rforest and adaboost.
// Throws std::invalid_argument for other kinds.
std::vector<double> gini_importance(const TrainedModel& model);

inline constexpr int kModelFormatVersion = 1;

nlohmann::ordered_json to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);  // throws DataError
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace igbot
