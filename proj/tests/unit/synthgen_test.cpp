#include <algorithm>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "igbot/error.hpp"
#include "igbot/evaluation.hpp"
#include "igbot/features.hpp"
#include "igbot/preprocessing.hpp"
#include "igbot/synthgen.hpp"

using namespace igbot;

namespace {

SynthConfig sized(std::int64_t per_class, double sep, std::uint64_t seed = 42) {
  SynthConfig c;
  c.n_bots = per_class;
  c.n_genuine = per_class;
  c.separability = sep;
  c.seed = seed;
  return c;
}

double gnb_cv_accuracy(const SynthConfig& c) {
  const auto fm = standardize_features(build_feature_matrix(generate_dataset(c)).labelled());
  return kfold_cv(ModelSpec::defaults(ModelKind::gnb), fm.x, fm.y, 5, 1).mean.accuracy;
}

}  // namespace

TEST(SynthConfig, Validation) {
  EXPECT_NO_THROW(SynthConfig{}.validate());
  auto bad = SynthConfig{};
  bad.separability = 1.5;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = SynthConfig{};
  bad.n_providers = 2000;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = SynthConfig{};
  bad.time_span = 86'400;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = SynthConfig{};
  bad.n_genuine = 0;
  EXPECT_THROW(generate_dataset(bad), ConfigError);
}

TEST(SynthConfig, JsonRoundTripAndUnknownKeys) {
  auto c = sized(17, 0.3, 9);
  EXPECT_EQ(synth_config_from_json(nlohmann::json::parse(to_json(c).dump())), c);
  EXPECT_THROW(synth_config_from_json(nlohmann::json::parse(R"({"n_bot": 3})")), ConfigError);
  EXPECT_THROW(synth_config_from_json(nlohmann::json::parse(R"({"separability": "high"})")), ConfigError);
}

TEST(Profiles, InterpolationEndpoints) {
  const auto g = genuine_profile();
  const auto e = provider_extreme(2);
  EXPECT_EQ(interpolate(g, e, 0.0), g);
  EXPECT_EQ(interpolate(g, e, 1.0), e);
  EXPECT_EQ(provider_extreme(7), provider_extreme(2));
  EXPECT_EQ(provider_name(0), "p1");
  EXPECT_EQ(provider_name(4), "p5");
}

TEST(Generate, ShapeAndValidity) {
  SynthConfig c = sized(103, 0.8);
  c.n_genuine = 57;
  const auto ds = generate_dataset(c);
  ASSERT_EQ(ds.records.size(), 160u);
  EXPECT_EQ(ds.provenance.source, "synthgen");
  std::map<std::string, int> per_provider;
  std::set<std::string> ids;
  std::size_t genuine = 0;
  for (const auto& r : ds.records) {
    EXPECT_TRUE(validate_record(r).empty()) << r.id;
    ids.insert(r.id);
    if (r.label == Label::bot) {
      per_provider[r.provider]++;
    } else {
      EXPECT_EQ(r.label, Label::genuine);
      EXPECT_TRUE(r.provider.empty());
      ++genuine;
    }
    EXPECT_TRUE(std::is_sorted(r.post_times.begin(), r.post_times.end()));
    for (auto t : r.post_times) {
      EXPECT_GE(t, c.time_origin);
      EXPECT_LE(t, c.time_origin + c.time_span);
    }
  }
  EXPECT_EQ(ids.size(), 160u);
  EXPECT_EQ(genuine, 57u);
  EXPECT_EQ(per_provider, (std::map<std::string, int>{{"p1", 21}, {"p2", 21}, {"p3", 21}, {"p4", 20}, {"p5", 20}}));
}

TEST(Generate, DeterministicPerSeed) {
  const auto a = generate_dataset(sized(50, 0.6, 5));
  const auto b = generate_dataset(sized(50, 0.6, 5));
  const auto c = generate_dataset(sized(50, 0.6, 6));
  EXPECT_EQ(a.records, b.records);
  EXPECT_NE(a.records, c.records);
}

TEST(Generate, SeparabilityControlsDifficulty) {
  EXPECT_GT(gnb_cv_accuracy(sized(300, 1.0)), 0.9);
  EXPECT_LT(gnb_cv_accuracy(sized(300, 0.0)), 0.6);
}
