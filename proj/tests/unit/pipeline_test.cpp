#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "igbot/error.hpp"
#include "igbot/pipeline.hpp"

using namespace igbot;
namespace fs = std::filesystem;

namespace {

PipelineConfig small_config(const fs::path& out) {
  auto c = PipelineConfig::defaults();
  SynthConfig s;
  s.n_bots = 150;
  s.n_genuine = 150;
  s.seed = c.seed;
  c.synth = s;
  c.models = {ModelSpec::defaults(ModelKind::gnb), ModelSpec::defaults(ModelKind::dtree),
              ModelSpec::defaults(ModelKind::adaboost)};
  c.experiment = {4, 1, 5, 30};
  c.cv_folds = 5;
  c.ci_sample_size = 30;
  c.pdp_grid_size = 5;
  c.top_n = 10;
  c.out_dir = out;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PipelineConfig parse(const char* text) { return pipeline_config_from_json(nlohmann::json::parse(text)); }

}  // namespace

TEST(PipelineConfig, DefaultsAreValid) {
  const auto c = PipelineConfig::defaults();
  EXPECT_NO_THROW(c.validate());
  ASSERT_EQ(c.models.size(), 6u);
  EXPECT_EQ(c.final_spec().kind(), ModelKind::adaboost);
  EXPECT_EQ(c.experiment.repetitions, 100u);
  EXPECT_EQ(c.experiment.shuffles_per_rep, 10u);
}

TEST(PipelineConfig, JsonRoundTripAndHash) {
  auto c = small_config("a");
  auto back = pipeline_config_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
  auto moved = c;
  moved.out_dir = "elsewhere";
  EXPECT_EQ(config_hash(moved), config_hash(c));
  auto reseeded = c;
  reseeded.seed = 7;
  EXPECT_NE(config_hash(reseeded), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
}

TEST(PipelineConfig, SynthSeedInheritsMasterSeed) {
  const auto c = parse(R"({"seed": 9, "synth": {"n_bots": 50}})");
  ASSERT_TRUE(c.synth);
  EXPECT_EQ(c.synth->seed, 9u);
  EXPECT_EQ(c.synth->n_bots, 50);
  const auto d = parse(R"({"seed": 9})");
  ASSERT_TRUE(d.synth);
  EXPECT_EQ(d.synth->seed, 9u);
}

TEST(PipelineConfig, Rejections) {
  EXPECT_THROW(parse(R"({"dataset": "a.jsonl", "synth": {}})"), ConfigError);
  EXPECT_THROW(parse(R"({"bogus": 1})"), ConfigError);
  EXPECT_THROW(parse(R"({"final_model": "svm"})"), ConfigError);
  EXPECT_THROW(parse(R"({"models": [{"kind": "gnb"}], "final_model": "adaboost"})"), ConfigError);
  EXPECT_THROW(parse(R"({"models": [{"kind": "gnb"}, {"kind": "gnb"}], "final_model": "gnb"})"), ConfigError);
  EXPECT_THROW(parse(R"({"cv_folds": 1})"), ConfigError);
  EXPECT_THROW(parse(R"({"test_fraction": 1.0})"), ConfigError);
  EXPECT_THROW(parse(R"({"experiment": {"repetitions": 1}})"), ConfigError);
  EXPECT_THROW(parse(R"({"ci_sample_size": 10})"), ConfigError);
  EXPECT_THROW(parse(R"({"seed": -1})"), ConfigError);
  EXPECT_NO_THROW(parse(R"({"corr_threshold": 1.01, "importance_threshold": 0})"));
}

TEST(Pipeline, MissingDatasetIsDataError) {
  auto c = PipelineConfig::defaults();
  c.synth.reset();
  c.dataset_path = "/nonexistent/igbot.jsonl";
  Pipeline p(c);
  EXPECT_THROW(p.dataset(), DataError);
}

TEST(Pipeline, StagesAreConsistent) {
  Pipeline p(small_config(fs::temp_directory_path() / "igbot_pipe_stages"));
  EXPECT_EQ(p.features().rows(), 300u);
  EXPECT_EQ(p.pruned().names, p.selection().kept);
  EXPECT_EQ(p.classification().size(), 3u);
  EXPECT_EQ(p.final_model().feature_names(), p.pruned().names);
  ASSERT_TRUE(p.final_model().scaling());
  EXPECT_EQ(p.holdout().size(), 5u);
  EXPECT_EQ(p.ranking().size(), 10u);
  EXPECT_EQ(p.confidence().bots.n, 30u);
  EXPECT_EQ(p.explain().pdps.size(), p.pruned().names.size());
}

TEST(Pipeline, RunIsByteIdenticalAcrossDirectories) {
  const auto a = fs::temp_directory_path() / "igbot_pipe_a";
  const auto b = fs::temp_directory_path() / "igbot_pipe_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const auto ra = run_pipeline(small_config(a));
  const auto rb = run_pipeline(small_config(b));
  ASSERT_EQ(ra.files, rb.files);
  for (const char* f : {"selection", "classification", "comparison", "confidence", "explain", "holdout",
                        "ranking", "manifest"}) {
    EXPECT_NE(std::find(ra.files.begin(), ra.files.end(), std::string(f) + ".json"), ra.files.end()) << f;
  }
  EXPECT_NE(std::find(ra.files.begin(), ra.files.end(), "tables/features.csv"), ra.files.end());
  for (const auto& f : ra.files) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  EXPECT_FALSE(ra.summary.empty());
}
