#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "igbot/features.hpp"
#include "igbot/matrix.hpp"
#include "igbot/scaling.hpp"

namespace igbot {

struct Standardized {
  Matrix x;
  StandardizationParams params;
};

// Column-wise z-scores with population std. Throws std::invalid_argument on
// an empty matrix.
Standardized z_standardize(const Matrix& x);
FeatureMatrix standardize_features(const FeatureMatrix& fm, StandardizationParams* params_out = nullptr);

// Pearson r, or 0 when either input is constant. Throws std::invalid_argument
// on a length mismatch or fewer than two points.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Uniform random partition with |test| = round(n * test_fraction).
Split train_test_split(std::size_t n, double test_fraction, std::uint64_t seed);

struct CorrelatedDrop {
  std::string dropped;
  std::string kept_partner;
  double r = 0.0;
};

struct UnimportantDrop {
  std::string name;
  double importance = 0.0;
};

struct FeatureSelection {
  std::vector<std::string> kept;
  std::vector<CorrelatedDrop> dropped_correlated;
  std::vector<UnimportantDrop> dropped_unimportant;
  std::vector<double> reference_importance;  // aligned with the input feature order
};

inline constexpr double kDefaultCorrThreshold = 0.95;
inline constexpr double kDefaultImportanceThreshold = 0.01;

// Two-phase pruning on a standardized matrix: drop features whose
// reference-forest importance is below importance_threshold, then scan the
// surviving pairs in column order and drop the later member of any pair with
// |r| >= corr_threshold.
FeatureSelection prune_features(const FeatureMatrix& standardized, double corr_threshold,
                                double importance_threshold, std::uint64_t seed);

nlohmann::ordered_json to_json(const FeatureSelection& selection);
FeatureSelection feature_selection_from_json(const nlohmann::json& j);

}  // namespace igbot
