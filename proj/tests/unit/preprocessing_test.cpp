#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "igbot/error.hpp"
#include "igbot/preprocessing.hpp"
#include "igbot/synthgen.hpp"

using namespace igbot;

namespace {

FeatureMatrix benchmark_matrix(double separability = 0.8, std::int64_t per_class = 300) {
  SynthConfig c;
  c.n_bots = per_class;
  c.n_genuine = per_class;
  c.separability = separability;
  return standardize_features(build_feature_matrix(generate_dataset(c)).labelled());
}

std::set<std::string> partition_union(const FeatureSelection& s) {
  std::set<std::string> all(s.kept.begin(), s.kept.end());
  for (const auto& d : s.dropped_correlated) EXPECT_TRUE(all.insert(d.dropped).second);
  for (const auto& d : s.dropped_unimportant) EXPECT_TRUE(all.insert(d.name).second);
  return all;
}

}  // namespace

TEST(ZStandardize, OneTwoThree) {
  const auto st = z_standardize(Matrix::from_rows({{1}, {2}, {3}}));
  EXPECT_NEAR(st.x(0, 0), -1.22474, 1e-5);
  EXPECT_NEAR(st.x(0, 0), -1.0 / std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_EQ(st.x(1, 0), 0.0);
  EXPECT_NEAR(st.x(2, 0), 1.22474, 1e-5);
}

TEST(ZStandardize, ConstantColumnMapsToZero) {
  const auto st = z_standardize(Matrix::from_rows({{5}, {5}, {5}}));
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(st.x(r, 0), 0.0);
  EXPECT_EQ(st.params.stds[0], 0.0);
}

TEST(ZStandardize, Idempotent) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(3.0, 7.0);
  Matrix x(50, 4);
  for (std::size_t r = 0; r < 50; ++r)
    for (std::size_t c = 0; c < 4; ++c) x(r, c) = g(rng);
  const auto once = z_standardize(x);
  const auto twice = z_standardize(once.x);
  for (std::size_t i = 0; i < once.x.data().size(); ++i) EXPECT_NEAR(once.x.data()[i], twice.x.data()[i], 1e-9);
}

TEST(ZStandardize, ColumnsHaveZeroMeanUnitStd) {
  std::mt19937_64 rng(4);
  std::lognormal_distribution<double> g(5.0, 1.5);
  Matrix x(200, 3);
  for (std::size_t r = 0; r < 200; ++r)
    for (std::size_t c = 0; c < 3; ++c) x(r, c) = g(rng);
  const auto st = z_standardize(x);
  for (std::size_t c = 0; c < 3; ++c) {
    const auto col = st.x.column(c);
    double m = 0, v = 0;
    for (double d : col) m += d;
    m /= col.size();
    for (double d : col) v += (d - m) * (d - m);
    EXPECT_LT(std::abs(m), 1e-9);
    EXPECT_NEAR(std::sqrt(v / col.size()), 1.0, 1e-9);
  }
}

TEST(ZStandardize, SavedParamsReproduceTrainingMatrix) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-100, 1e6);
  Matrix x(80, 5);
  for (std::size_t r = 0; r < 80; ++r)
    for (std::size_t c = 0; c < 5; ++c) x(r, c) = u(rng);
  const auto st = z_standardize(x);
  const auto again = st.params.apply(x);
  for (std::size_t i = 0; i < again.data().size(); ++i) EXPECT_NEAR(again.data()[i], st.x.data()[i], 1e-12);
}

TEST(ZStandardize, EmptyRejected) { EXPECT_THROW(z_standardize(Matrix()), std::invalid_argument); }

TEST(Pearson, Examples) {
  const std::vector<double> x = {1, 2, 3};
  EXPECT_NEAR(pearson_correlation(x, std::vector<double>{1, 2, 3}), 1.0, 1e-12);
  EXPECT_NEAR(pearson_correlation(x, std::vector<double>{3, 2, 1}), -1.0, 1e-12);
  EXPECT_NEAR(pearson_correlation(x, std::vector<double>{1, 3, 2}), 0.5, 1e-12);
  EXPECT_EQ(pearson_correlation(x, std::vector<double>{4, 4, 4}), 0.0);
  EXPECT_THROW(pearson_correlation(x, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(TrainTestSplit, SeventyThirty) {
  const auto s = train_test_split(2000, 0.3, 42);
  EXPECT_EQ(s.train.size(), 1400u);
  EXPECT_EQ(s.test.size(), 600u);
}

TEST(TrainTestSplit, DeterministicPartition) {
  const auto a = train_test_split(10, 0.5, 7);
  const auto b = train_test_split(10, 0.5, 7);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.train.size(), 5u);
  EXPECT_EQ(a.test.size(), 5u);
  std::set<std::size_t> all(a.train.begin(), a.train.end());
  all.insert(a.test.begin(), a.test.end());
  EXPECT_EQ(all.size(), 10u);
}

TEST(TrainTestSplit, SeedsDiffer) {
  int differing = 0;
  for (std::uint64_t s = 0; s < 20; ++s) differing += train_test_split(20, 0.5, s).test != train_test_split(20, 0.5, s + 100).test;
  EXPECT_GE(differing, 19);
}

TEST(TrainTestSplit, BadFraction) {
  EXPECT_THROW(train_test_split(10, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(train_test_split(10, 1.0, 1), std::invalid_argument);
}

TEST(PruneFeatures, DuplicateColumnDroppedOnce) {
  auto fm = benchmark_matrix();
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    auto row = std::vector<double>(fm.x.row(r).begin(), fm.x.row(r).end());
    row.push_back(fm.x(r, fm.column_index("max")));
    rows.push_back(row);
  }
  fm.x = Matrix::from_rows(rows);
  fm.names.push_back("max_copy");
  const auto sel = prune_features(fm, 0.95, 0.0, 3);
  const bool max_kept = std::count(sel.kept.begin(), sel.kept.end(), "max") == 1;
  const bool copy_kept = std::count(sel.kept.begin(), sel.kept.end(), "max_copy") == 1;
  EXPECT_NE(max_kept, copy_kept);
  EXPECT_TRUE(std::any_of(sel.dropped_correlated.begin(), sel.dropped_correlated.end(), [](const auto& d) {
    return (d.dropped == "max_copy" && d.kept_partner == "max") || (d.dropped == "max" && d.kept_partner == "max_copy");
  }));
  EXPECT_EQ(partition_union(sel).size(), 14u);
}

TEST(PruneFeatures, NoiseFeatureDroppedByImportance) {
  auto fm = benchmark_matrix(0.8, 1000);
  std::mt19937_64 rng(123);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    auto row = std::vector<double>(fm.x.row(r).begin(), fm.x.row(r).end());
    row.push_back(g(rng));
    rows.push_back(row);
  }
  fm.x = Matrix::from_rows(rows);
  fm.names.push_back("noise");
  const auto sel = prune_features(fm, kDefaultCorrThreshold, kDefaultImportanceThreshold, 42);
  EXPECT_TRUE(std::any_of(sel.dropped_unimportant.begin(), sel.dropped_unimportant.end(),
                          [](const auto& d) { return d.name == "noise"; }));
}

TEST(PruneFeatures, UnreachableThresholdsKeepEverything) {
  const auto fm = benchmark_matrix();
  const auto sel = prune_features(fm, 1.01, 0.0, 3);
  EXPECT_EQ(sel.kept, fm.names);
  EXPECT_TRUE(sel.dropped_correlated.empty());
  EXPECT_TRUE(sel.dropped_unimportant.empty());
}

TEST(PruneFeatures, PartitionsInputAndRoundTrips) {
  const auto fm = benchmark_matrix();
  const auto sel = prune_features(fm, kDefaultCorrThreshold, kDefaultImportanceThreshold, 5);
  const auto all = partition_union(sel);
  EXPECT_EQ(all, std::set<std::string>(fm.names.begin(), fm.names.end()));
  const auto back = feature_selection_from_json(nlohmann::json::parse(to_json(sel).dump()));
  EXPECT_EQ(back.kept, sel.kept);
  EXPECT_EQ(back.dropped_correlated.size(), sel.dropped_correlated.size());
  EXPECT_EQ(back.reference_importance, sel.reference_importance);
}

TEST(PruneFeatures, InvalidThresholds) {
  const auto fm = benchmark_matrix();
  EXPECT_THROW(prune_features(fm, 0.0, 0.01, 1), std::invalid_argument);
  EXPECT_THROW(prune_features(fm, 0.9, 1.5, 1), std::invalid_argument);
  EXPECT_THROW(prune_features(fm, 0.9, -0.1, 1), std::invalid_argument);
}
