#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "igbot/account.hpp"
#include "igbot/classifiers.hpp"
#include "igbot/matrix.hpp"
#include "igbot/model_spec.hpp"

namespace igbot {

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Scores with bot as the positive class.
struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> roc_auc;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

inline constexpr std::array<const char*, 4> kMetricNames = {"accuracy", "precision", "recall", "f1"};
double metric_value(const Metrics& m, std::size_t index);

ConfusionCounts confusion_counts(std::span<const int> y_true, std::span<const int> y_pred);
Metrics metrics_from_counts(const ConfusionCounts& c);
// Throws std::invalid_argument on length mismatch or empty input.
Metrics confusion_metrics(std::span<const int> y_true, std::span<const int> y_pred);

// Mann-Whitney AUC with ties counted as one half. Throws
// std::invalid_argument unless both classes are present.
double roc_auc(std::span<const int> y_true, std::span<const double> scores);

struct CvReport {
  std::vector<Metrics> folds;
  Metrics mean;
  std::vector<std::size_t> fold_of_row;  // fold index per input row
};

// Shuffled k-fold partition; the first n % k folds hold one extra row.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

CvReport kfold_cv(const ModelSpec& spec, const Matrix& x, std::span<const int> y, std::size_t k,
                  std::uint64_t seed);

// One-tailed two-sample z test of H1: mean(b) > mean(a), with sample
// variances. Throws std::invalid_argument when either sample is smaller than
// min_size.
double one_tailed_z_test(std::span<const double> a, std::span<const double> b,
                         std::size_t min_size = 30);

enum class VarianceConvention { sample, population };

struct ConfidenceInterval {
  double center = 0.0;
  double half_width = 0.0;
  std::size_t n = 0;
};

// mean +/- z* s / sqrt(n) with z* = Phi^-1((1 + level) / 2).
ConfidenceInterval confidence_interval(std::span<const double> sample, double level,
                                       VarianceConvention convention = VarianceConvention::sample,
                                       std::size_t min_size = 30);

std::string format_interval(const ConfidenceInterval& ci, int center_decimals = 2,
                            int width_decimals = 3);

struct ExperimentOptions {
  std::size_t repetitions = 100;
  std::size_t shuffles_per_rep = 10;
  std::size_t k = 10;
  std::size_t test_sample_size = 40;
};

struct MetricComparison {
  std::string metric;
  double basic_mean = 0.0;
  double basic_band = 0.0;  // two standard deviations
  double all_mean = 0.0;
  double all_band = 0.0;
  double p_value = 0.0;
};

struct ComparisonReport {
  // samples[arm][metric][repetition]; arm 0 = basic features, 1 = all features.
  std::array<std::array<std::vector<double>, 4>, 2> samples;
  std::vector<std::size_t> test_sample;  // repetitions drawn for the z test
  std::vector<MetricComparison> rows;
};

// Repeats shuffled k-fold CV of the naive Bayes baseline on both feature sets
// and tests whether the all-features arm scores higher. Both arms see the
// same shuffles, folds, and test draws.
ComparisonReport repeated_experiment(const Matrix& x_basic, const Matrix& x_all,
                                     std::span<const int> y, const ExperimentOptions& options,
                                     std::uint64_t seed);

struct GridSearchResult {
  ModelSpec best;
  std::size_t best_index = 0;
  std::vector<CvReport> reports;
};

// Highest mean CV F1 wins; ties keep the earlier spec. Throws ConfigError for
// an empty grid or mixed model kinds.
GridSearchResult grid_search(std::span<const ModelSpec> grid, const Matrix& x, std::span<const int> y,
                             std::size_t k, std::uint64_t seed);

struct HoldoutIteration {
  std::string provider;
  Metrics metrics;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;  // repeats possible when genuine rows were resampled
  bool genuine_resampled = false;
};

// Leave-one-provider-out: each provider's bots plus an equal number of
// genuine accounts form the test set; the model is refit on everything else
// (standardized on the training rows). Throws DataError with fewer than two
// providers.
std::vector<HoldoutIteration> provider_holdout(const Dataset& dataset, const ModelSpec& spec,
                                               std::span<const std::string> feature_names,
                                               std::uint64_t seed);

struct RankedAccount {
  std::string id;
  double p_bot = 0.0;
};

// Bot probability for every record, using the model's stored scaling.
std::vector<double> score_accounts(const TrainedModel& model, const Dataset& dataset);

// Descending p_bot, ties by ascending id, at most top_n entries.
std::vector<RankedAccount> rank_by_bot_probability(const TrainedModel& model, const Dataset& dataset,
                                                   std::size_t top_n);

nlohmann::ordered_json to_json(const Metrics& m);
nlohmann::ordered_json to_json(const CvReport& r);
nlohmann::ordered_json to_json(const ComparisonReport& r);

}  // namespace igbot
