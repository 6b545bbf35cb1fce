#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "igbot/features.hpp"
#include "oracles.hpp"

using namespace igbot;

namespace {

std::vector<std::int64_t> random_times(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::int64_t> base(1'400'000'000, 1'600'000'000);
  std::uniform_int_distribution<std::int64_t> spread(0, 90'000'000);
  const auto origin = base(rng);
  std::vector<std::int64_t> t(n);
  for (auto& v : t) v = origin + spread(rng);
  return t;
}

void expect_rel(double actual, long double expected, double rel, double floor = 1.0) {
  const double e = static_cast<double>(expected);
  EXPECT_NEAR(actual, e, rel * std::max(std::abs(e), floor));
}

}  // namespace

TEST(BehavioralMeasures, ConstantSeries) {
  const std::vector<std::int64_t> t = {100, 100, 100};
  const auto s = behavioral_measures(t);
  EXPECT_EQ(s.min, 100);
  EXPECT_EQ(s.max, 100);
  EXPECT_EQ(s.mean, 100);
  EXPECT_EQ(s.median, 100);
  EXPECT_EQ(s.std, 0);
  EXPECT_EQ(s.skewness, 0);
  EXPECT_EQ(s.kurtosis, 0);
  EXPECT_EQ(s.entropy, 0);
}

TEST(BehavioralMeasures, OneTwoThreeFour) {
  const std::vector<std::int64_t> t = {1, 2, 3, 4};
  const auto s = behavioral_measures(t);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_NEAR(s.std, std::sqrt(1.25), 1e-12);
  EXPECT_NEAR(s.std, 1.11803, 1e-5);
  EXPECT_NEAR(s.skewness, 0.0, 1e-12);
  EXPECT_NEAR(s.kurtosis, -1.36, 1e-12);
}

TEST(BehavioralMeasures, EmptyIsAllZero) {
  EXPECT_EQ(behavioral_measures({}), BehaviorStats{});
}

TEST(BehavioralMeasures, SingleTimestamp) {
  const std::vector<std::int64_t> t = {1'234'567'890};
  const auto s = behavioral_measures(t);
  EXPECT_EQ(s.min, 1'234'567'890);
  EXPECT_EQ(s.max, 1'234'567'890);
  EXPECT_EQ(s.mean, 1'234'567'890);
  EXPECT_EQ(s.median, 1'234'567'890);
  EXPECT_EQ(s.std, 0);
  EXPECT_EQ(s.skewness, 0);
  EXPECT_EQ(s.kurtosis, 0);
  EXPECT_EQ(s.entropy, 0);
}

TEST(BehavioralMeasures, OrderingInvariants) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto t = random_times(rng, 1 + rng() % 60);
    const auto s = behavioral_measures(t);
    EXPECT_LE(s.min, s.median);
    EXPECT_LE(s.median, s.max);
    EXPECT_GE(s.std, 0);
    EXPECT_GE(s.entropy, 0);
    EXPECT_LE(s.entropy, std::log(16.0) + 1e-12);
  }
}

TEST(BehavioralMeasures, MatchesOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto t = random_times(rng, 2 + rng() % 499);
    const auto s = behavioral_measures(t);
    const auto o = oracle::moments(t);
    expect_rel(s.min, o.min, 1e-9);
    expect_rel(s.max, o.max, 1e-9);
    expect_rel(s.mean, o.mean, 1e-9);
    expect_rel(s.median, o.median, 1e-9);
    expect_rel(s.std, o.std, 1e-9);
    expect_rel(s.skewness, o.skewness, 1e-9);
    expect_rel(s.kurtosis, o.kurtosis, 1e-9);
    expect_rel(s.entropy, o.entropy, 1e-9);
  }
}

TEST(BehavioralMeasures, ShiftProperty) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto t = random_times(rng, 2 + rng() % 200);
    const std::int64_t c = static_cast<std::int64_t>(rng() % 100'000'000);
    auto shifted = t;
    for (auto& v : shifted) v += c;
    const auto a = behavioral_measures(t);
    const auto b = behavioral_measures(shifted);
    EXPECT_NEAR(b.min - a.min, c, 1e-9 * std::abs(b.min));
    EXPECT_NEAR(b.max - a.max, c, 1e-9 * std::abs(b.max));
    EXPECT_NEAR(b.mean - a.mean, c, 1e-9 * std::abs(b.mean));
    EXPECT_NEAR(b.median - a.median, c, 1e-9 * std::abs(b.median));
    EXPECT_NEAR(b.std, a.std, 1e-9);
    EXPECT_NEAR(b.skewness, a.skewness, 1e-9);
    EXPECT_NEAR(b.kurtosis, a.kurtosis, 1e-9);
    EXPECT_NEAR(b.entropy, a.entropy, 1e-9);
  }
}

TEST(BehavioralMeasures, PermutationInvariant) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    auto t = random_times(rng, 2 + rng() % 200);
    const auto a = behavioral_measures(t);
    std::shuffle(t.begin(), t.end(), rng);
    EXPECT_EQ(behavioral_measures(t), a);
  }
}

TEST(ShannonEntropy, UniformOverSixteenBins) {
  std::vector<double> v;
  for (int i = 0; i < 16; ++i) v.push_back(i + 0.5);
  v.front() = 0.0;
  v.back() = 16.0;
  EXPECT_NEAR(shannon_entropy(v, 16), std::log(16.0), 1e-12);
  EXPECT_NEAR(shannon_entropy(v, 16), 2.77259, 1e-5);
}

TEST(ShannonEntropy, AllEqualIsZero) {
  const std::vector<double> v(10, 4.2);
  EXPECT_EQ(shannon_entropy(v), 0.0);
}

TEST(ShannonEntropy, ThreeToOneSplit) {
  const std::vector<double> v = {0, 0, 0, 1};
  EXPECT_NEAR(shannon_entropy(v, 2), -(0.75 * std::log(0.75) + 0.25 * std::log(0.25)), 1e-12);
  EXPECT_NEAR(shannon_entropy(v, 2), 0.56234, 1e-5);
}

TEST(ShannonEntropy, ZeroBinsRejected) {
  const std::vector<double> v = {1, 2};
  EXPECT_THROW(shannon_entropy(v, 0), std::invalid_argument);
}

TEST(ShannonEntropy, FewerThanTwoValues) {
  EXPECT_EQ(shannon_entropy(std::vector<double>{}), 0.0);
  EXPECT_EQ(shannon_entropy(std::vector<double>{3.0}), 0.0);
}

TEST(AssembleFeatures, EmptyPostsKeepBasicBlock) {
  AccountRecord r;
  r.id = "x";
  r.username_length = 7;
  r.full_name_length = 3;
  r.biography_length = 0;
  r.followers_count = 10;
  r.followings_count = 20;
  const auto fv = assemble_features(r);
  EXPECT_EQ(fv["username_length"], 7);
  EXPECT_EQ(fv["full_name_length"], 3);
  EXPECT_EQ(fv["followers_count"], 10);
  EXPECT_EQ(fv["followings_count"], 20);
  EXPECT_EQ(fv.behavior(), BehaviorStats{});
}

TEST(AssembleFeatures, TwoPosts) {
  AccountRecord r;
  r.post_times = {10, 20};
  const auto fv = assemble_features(r);
  EXPECT_EQ(fv["min"], 10);
  EXPECT_EQ(fv["max"], 20);
  EXPECT_EQ(fv["mean"], 15);
}

TEST(AssembleFeatures, IdIsNotAFeature) {
  AccountRecord a;
  a.id = "first";
  a.post_times = {5, 9, 40};
  a.followers_count = 4;
  auto b = a;
  b.id = "second";
  EXPECT_EQ(assemble_features(a), assemble_features(b));
}

TEST(AssembleFeatures, AllValuesFinite) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    AccountRecord r;
    r.post_times = random_times(rng, rng() % 20);
    for (double v : assemble_features(r).values) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(FeatureNames, BasicAndBehavioralPartition) {
  EXPECT_EQ(all_feature_names().size(), 13u);
  EXPECT_EQ(basic_feature_names().size(), 5u);
  for (const auto& n : basic_feature_names()) EXPECT_FALSE(is_behavioral_feature(n));
  EXPECT_TRUE(is_behavioral_feature("max"));
  EXPECT_TRUE(is_behavioral_feature("entropy"));
}

TEST(FeatureMatrix, BuildAndSelect) {
  Dataset ds;
  AccountRecord a;
  a.id = "a";
  a.label = Label::bot;
  a.post_times = {1, 2, 3};
  AccountRecord b;
  b.id = "b";
  b.label = Label::unknown;
  AccountRecord c;
  c.id = "c";
  c.label = Label::genuine;
  ds.records = {a, b, c};
  const auto fm = build_feature_matrix(ds);
  EXPECT_EQ(fm.rows(), 3u);
  EXPECT_EQ(fm.x.cols(), 13u);
  EXPECT_EQ(fm.y, (Labels{kBot, kUnlabelled, kGenuine}));
  const auto lab = fm.labelled();
  EXPECT_EQ(lab.ids, (std::vector<std::string>{"a", "c"}));
  const std::vector<std::string> keep = {"max", "username_length"};
  const auto sel = fm.select_features(keep);
  EXPECT_EQ(sel.names, keep);
  EXPECT_EQ(sel.x(0, 0), 3);
  EXPECT_THROW(fm.column_index("nope"), std::out_of_range);
}

TEST(FeatureCsv, HeaderAndLabelColumn) {
  Dataset ds;
  AccountRecord a;
  a.id = "a";
  a.label = Label::bot;
  ds.records = {a};
  std::ostringstream out;
  write_feature_csv(build_feature_matrix(ds), out);
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header,
            "username_length,full_name_length,biography_length,followers_count,followings_count,"
            "min,max,mean,median,std,skewness,kurtosis,entropy,label");
  EXPECT_EQ(row.substr(row.rfind(',') + 1), "bot");
}
