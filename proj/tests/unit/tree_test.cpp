#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "igbot/classifiers.hpp"
#include "igbot/tree.hpp"

using namespace igbot;

namespace {

struct Data {
  Matrix x;
  Labels y;
};

// Two informative features plus noise; label from a noisy linear rule.
Data noisy_data(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Data d{Matrix(n, 4), Labels(n)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < 4; ++c) d.x(r, c) = g(rng);
    d.y[r] = d.x(r, 0) + 0.5 * d.x(r, 1) + 0.4 * g(rng) > 0 ? kBot : kGenuine;
  }
  return d;
}

}  // namespace

TEST(NodeImpurity, KnownValues) {
  EXPECT_NEAR(node_impurity(Criterion::gini, 4, 1), 0.375, 1e-15);
  EXPECT_NEAR(node_impurity(Criterion::gini, 4, 2), 0.5, 1e-15);
  EXPECT_NEAR(node_impurity(Criterion::entropy, 4, 2), 1.0, 1e-15);
  EXPECT_EQ(node_impurity(Criterion::entropy, 4, 4), 0.0);
  EXPECT_EQ(node_impurity(Criterion::gini, 4, 0), 0.0);
}

TEST(DecisionTree, LeafProportion) {
  const auto x = Matrix::from_rows({{0}, {1}, {2}, {3}});
  const Labels y = {kBot, kBot, kGenuine, kBot};
  TreeOptions opt;
  opt.max_depth = 0;
  Rng rng(1);
  const auto tree = DecisionTree::fit(x, y, {}, opt, rng);
  ASSERT_EQ(tree.nodes().size(), 1u);
  const std::vector<double> q = {1.5};
  EXPECT_DOUBLE_EQ(tree.prob_bot(q), 0.75);
}

TEST(DecisionTree, StumpImportanceOnSplitFeature) {
  const auto x = Matrix::from_rows({{-2, 5}, {-1, -3}, {1, 4}, {2, -1}});
  const Labels y = {kGenuine, kGenuine, kBot, kBot};
  TreeOptions opt;
  opt.max_depth = 1;
  Rng rng(2);
  const auto tree = DecisionTree::fit(x, y, {}, opt, rng);
  EXPECT_EQ(tree.importance(), (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(tree.nodes()[0].feature, 0);
  EXPECT_DOUBLE_EQ(tree.nodes()[0].threshold, 0.0);
}

TEST(DecisionTree, NoSplitMeansZeroImportance) {
  const auto x = Matrix::from_rows({{1}, {2}});
  const Labels y = {kBot, kBot};
  Rng rng(3);
  const auto tree = DecisionTree::fit(x, y, {}, TreeOptions{}, rng);
  EXPECT_EQ(tree.importance(), (std::vector<double>{0.0}));
}

TEST(DecisionTree, RespectsDepthAndLeafSize) {
  const auto d = noisy_data(400, 4);
  TreeOptions opt;
  opt.max_depth = 4;
  opt.min_samples_leaf = 7;
  Rng rng(4);
  const auto tree = DecisionTree::fit(d.x, d.y, {}, opt, rng);
  EXPECT_LE(tree.depth(), 4u);
  for (const auto& n : tree.nodes()) {
    if (n.is_leaf()) {
      EXPECT_GE(n.samples, 7u);
    }
  }
}

TEST(DecisionTree, ZeroWeightRowsIgnored) {
  const auto d = noisy_data(200, 5);
  std::vector<double> w(400, 1.0);
  Matrix x(400, 4);
  Labels y(400);
  for (std::size_t r = 0; r < 200; ++r) {
    for (std::size_t c = 0; c < 4; ++c) x(r, c) = x(r + 200, c) = d.x(r, c);
    y[r] = d.y[r];
    y[r + 200] = 1 - d.y[r];  // contradicting copies, weight zero
    w[r + 200] = 0.0;
  }
  Rng a(6), b(6);
  const auto with_ignored = DecisionTree::fit(x, y, w, TreeOptions{}, a);
  const auto plain = DecisionTree::fit(d.x, d.y, {}, TreeOptions{}, b);
  for (std::size_t r = 0; r < 200; ++r) EXPECT_EQ(with_ignored.prob_bot(d.x.row(r)), plain.prob_bot(d.x.row(r)));
}

TEST(DecisionTree, UnreachableMinImpuritySplitIsDisabled) {
  const auto d = noisy_data(300, 7);
  TreeOptions on = tree_options(DtreeParams{});
  TreeOptions off = on;
  off.min_impurity_split.reset();
  Rng a(8), b(8);
  EXPECT_EQ(DecisionTree::fit(d.x, d.y, {}, on, a), DecisionTree::fit(d.x, d.y, {}, off, b));
}

TEST(DecisionTree, ReachableMinImpuritySplitStopsGrowth) {
  const auto d = noisy_data(300, 7);
  TreeOptions opt;
  opt.min_impurity_split = 0.6;  // above the two-class Gini maximum of 0.5
  Rng rng(9);
  EXPECT_EQ(DecisionTree::fit(d.x, d.y, {}, opt, rng).nodes().size(), 1u);
}

TEST(DecisionTree, RandomSplitterDeterministicPerSeed) {
  const auto d = noisy_data(300, 10);
  const auto opt = tree_options(DtreeParams{});
  Rng a(11), b(11), c(12);
  const auto t1 = DecisionTree::fit(d.x, d.y, {}, opt, a);
  EXPECT_EQ(t1, DecisionTree::fit(d.x, d.y, {}, opt, b));
  EXPECT_NE(t1, DecisionTree::fit(d.x, d.y, {}, opt, c));
}

TEST(DecisionTree, JsonRoundTrip) {
  const auto d = noisy_data(200, 13);
  Rng rng(13);
  const auto tree = DecisionTree::fit(d.x, d.y, {}, tree_options(DtreeParams{}), rng);
  EXPECT_EQ(DecisionTree::from_json(nlohmann::json::parse(tree.to_json().dump())), tree);
}

TEST(RandomForest, TwentyTrees) {
  const auto d = noisy_data(200, 14);
  const auto m = fit(ModelSpec::defaults(ModelKind::rforest), d.x, d.y, 1);
  EXPECT_EQ(std::get<RandomForest>(m.state()).trees().size(), 20u);
}

TEST(RandomForest, SingleFullTreeWithoutBootstrapEqualsDecisionTree) {
  const auto d = noisy_data(300, 15);
  ForestParams fp;
  fp.criterion = Criterion::gini;
  fp.max_depth = 10;
  fp.max_features.reset();
  fp.min_samples_split = 2;
  fp.min_samples_leaf = 2;
  fp.n_estimators = 1;
  fp.bootstrap = false;
  DtreeParams tp;
  tp.criterion = Criterion::gini;
  tp.max_depth = 10;
  tp.min_samples_split = 2;
  tp.min_samples_leaf = 2;
  tp.min_impurity_split.reset();
  tp.splitter = Splitter::best;
  for (std::uint64_t seed : {0ull, 1ull, 77ull}) {
    const auto forest = fit(ModelSpec{fp}, d.x, d.y, seed);
    const auto tree = fit(ModelSpec{tp}, d.x, d.y, seed);
    EXPECT_EQ(predict_proba(forest, d.x), predict_proba(tree, d.x));
    // The ensemble renormalizes its average, which may move the last bit.
    const auto fi = gini_importance(forest);
    const auto ti = gini_importance(tree);
    ASSERT_EQ(fi.size(), ti.size());
    for (std::size_t f = 0; f < fi.size(); ++f) EXPECT_NEAR(fi[f], ti[f], 1e-15);
  }
}

TEST(RandomForest, InformativeBeatsNoise) {
  const auto d = noisy_data(600, 16);
  const auto imp = gini_importance(fit(ModelSpec::defaults(ModelKind::rforest), d.x, d.y, 3));
  EXPECT_GT(imp[0], imp[2]);
  EXPECT_GT(imp[0], imp[3]);
  double sum = 0;
  for (double v : imp) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-9);
}
