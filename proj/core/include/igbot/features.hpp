#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "igbot/account.hpp"
#include "igbot/matrix.hpp"

namespace igbot {

// Summary of an account's posting behaviour. min/max/mean/median are epoch
// seconds, std is seconds, the rest are dimensionless.
struct BehaviorStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // excess
  double entropy = 0.0;

  friend bool operator==(const BehaviorStats&, const BehaviorStats&) = default;
};

inline constexpr std::size_t kDefaultEntropyBins = 16;

inline constexpr std::size_t kBasicFeatureCount = 5;
inline constexpr std::size_t kFeatureCount = 13;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "username_length", "full_name_length", "biography_length", "followers_count",
    "followings_count", "min", "max", "mean", "median", "std", "skewness", "kurtosis",
    "entropy"};

bool is_behavioral_feature(std::string_view name);

// Population moments over the timestamps. Empty input yields all zeros; a
// single timestamp or a constant series yields zero spread, shape and entropy.
BehaviorStats behavioral_measures(std::span<const std::int64_t> post_times,
                                  std::size_t entropy_bins = kDefaultEntropyBins);

// Natural-log entropy of an equal-width histogram over [min, max].
// Throws std::invalid_argument when bins == 0.
double shannon_entropy(std::span<const double> values, std::size_t bins = kDefaultEntropyBins);

struct FeatureVector {
  std::array<double, kFeatureCount> values{};
  Label label = Label::unknown;

  double operator[](std::string_view name) const;
  BehaviorStats behavior() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector assemble_features(const AccountRecord& record,
                                std::size_t entropy_bins = kDefaultEntropyBins);

// Class id used in FeatureMatrix::y for accounts without a label.
inline constexpr int kUnlabelled = -1;

// Named feature columns over a set of accounts, with ids and class ids
// (kGenuine, kBot, or kUnlabelled) kept row-aligned.
struct FeatureMatrix {
  std::vector<std::string> names;
  std::vector<std::string> ids;
  Matrix x;
  Labels y;

  std::size_t rows() const { return x.rows(); }
  std::size_t column_index(std::string_view name) const;  // throws std::out_of_range
  FeatureMatrix select_features(std::span<const std::string> keep) const;
  FeatureMatrix select_rows(std::span<const std::size_t> idx) const;
  FeatureMatrix labelled() const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

FeatureMatrix build_feature_matrix(const Dataset& dataset,
                                   std::size_t entropy_bins = kDefaultEntropyBins);

std::vector<std::string> all_feature_names();
std::vector<std::string> basic_feature_names();

// CSV with a header naming every feature plus `label`; one account per row.
void write_feature_csv(const FeatureMatrix& features, std::ostream& out);

}  // namespace igbot
