#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "igbot/adaboost.hpp"
#include "igbot/classifiers.hpp"

using namespace igbot;

namespace {

std::vector<double> uniform_weights(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

}  // namespace

TEST(SammeRound, QuarterErrorGivesLnThree) {
  const Labels y = {1, 1, 0, 0};
  const Labels pred = {1, 1, 0, 1};
  const auto step = samme_round(uniform_weights(4), pred, y, 2, 1.0);
  EXPECT_NEAR(step.alpha, std::log(3.0), 1e-9);
  EXPECT_NEAR(step.alpha, 1.09861, 1e-5);
  // Misclassified row scaled by 3 then renormalized: 3/6 vs 1/6.
  EXPECT_NEAR(step.weights[3], 0.5, 1e-12);
  EXPECT_NEAR(step.weights[0], 1.0 / 6.0, 1e-12);
}

TEST(SammeRound, CoinFlipGivesZero) {
  const Labels y = {1, 0};
  const Labels pred = {1, 1};
  EXPECT_NEAR(samme_round(uniform_weights(2), pred, y, 2, 1.0).alpha, 0.0, 1e-12);
}

TEST(SammeRound, PerfectLearnerClamped) {
  const Labels y = {1, 0, 1};
  const auto step = samme_round(uniform_weights(3), y, y, 2, 1.0);
  EXPECT_NEAR(step.alpha, std::log((1 - 1e-10) / 1e-10), 1e-9);
  EXPECT_NEAR(step.alpha, 23.026, 1e-3);
}

TEST(SammeRound, MulticlassTermAndLearningRate) {
  const Labels y = {1, 1, 0, 0};
  const Labels pred = {1, 1, 0, 1};
  EXPECT_NEAR(samme_round(uniform_weights(4), pred, y, 3, 0.5).alpha, 0.5 * (std::log(3.0) + std::log(2.0)), 1e-12);
}

TEST(SammeRound, WeightsMustSumToOne) {
  const Labels y = {1, 0};
  const std::vector<double> w = {0.5, 0.6};
  EXPECT_THROW(samme_round(w, y, y, 2, 1.0), std::invalid_argument);
}

TEST(AdaBoost, SeparableOneDimensional) {
  const auto x = Matrix::from_rows({{-3}, {-2}, {-1}, {1}, {2}, {3}});
  const Labels y = {kGenuine, kGenuine, kGenuine, kBot, kBot, kBot};
  const auto m = AdaBoostSamme::fit(AdaBoostParams{}, x, y, 1);
  ASSERT_GE(m.size(), 1u);
  EXPECT_EQ(m.errors()[0], 0.0);
  const auto staged = m.staged_predict(x);
  EXPECT_EQ(staged[0], y);
}

TEST(AdaBoost, TrainingErrorReachesZeroWithinThreeRounds) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double cut = u(rng);
    Matrix x(60, 1);
    Labels y(60);
    for (std::size_t r = 0; r < 60; ++r) {
      x(r, 0) = u(rng);
      y[r] = x(r, 0) > cut ? kBot : kGenuine;
    }
    y[0] = kBot;
    y[1] = kGenuine;
    x(0, 0) = 6.0;
    x(1, 0) = -6.0;
    const auto staged = AdaBoostSamme::fit(AdaBoostParams{}, x, y, trial).staged_predict(x);
    const auto rounds = std::min<std::size_t>(3, staged.size());
    EXPECT_EQ(staged[rounds - 1], y);
  }
}

TEST(AdaBoost, TrainingErrorNonIncreasingOnSeparableData) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Matrix x(200, 2);
  Labels y(200);
  for (std::size_t r = 0; r < 200; ++r) {
    x(r, 0) = g(rng);
    x(r, 1) = g(rng);
    y[r] = x(r, 0) > 0.3 ? kBot : kGenuine;
  }
  const auto m = AdaBoostSamme::fit(AdaBoostParams{}, x, y, 3);
  std::size_t previous = y.size() + 1;
  for (const auto& pred : m.staged_predict(x)) {
    std::size_t wrong = 0;
    for (std::size_t r = 0; r < y.size(); ++r) wrong += pred[r] != y[r];
    EXPECT_LE(wrong, previous);
    previous = wrong;
  }
  EXPECT_EQ(previous, 0u);
}

TEST(AdaBoost, UnanimousVoteGivesCertainty) {
  const auto x = Matrix::from_rows({{-1}, {1}});
  const Labels y = {kGenuine, kBot};
  TreeOptions opt;
  opt.max_depth = 1;
  Rng rng(1);
  const auto stump = DecisionTree::fit(x, y, {}, opt, rng);
  const auto m = AdaBoostSamme::from_members({stump, stump}, {1.0986, 1.0986});
  const std::vector<double> q = {2.0};
  EXPECT_EQ(m.prob_bot(q), 1.0);
  const TrainedModel tm(ModelSpec::defaults(ModelKind::adaboost), {"f"},
                        std::make_shared<const ModelState>(m));
  const auto proba = predict_proba(tm, Matrix::from_rows({{2.0}}));
  EXPECT_EQ(proba[0][0], 0.0);
  EXPECT_EQ(proba[0][1], 1.0);
}

TEST(AdaBoost, StumpOnMaxOnlyImportance) {
  const auto x = Matrix::from_rows({{0, -2}, {0, -1}, {0, 1}, {0, 2}});
  const Labels y = {kGenuine, kGenuine, kBot, kBot};
  const auto m = AdaBoostSamme::fit(AdaBoostParams{}, x, y, 4);
  EXPECT_EQ(m.importance(), (std::vector<double>{0.0, 1.0}));
}

TEST(AdaBoost, JsonRoundTrip) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  Matrix x(100, 3);
  Labels y(100);
  for (std::size_t r = 0; r < 100; ++r) {
    for (std::size_t c = 0; c < 3; ++c) x(r, c) = g(rng);
    y[r] = x(r, 0) + x(r, 1) + 0.5 * g(rng) > 0 ? kBot : kGenuine;
  }
  const auto m = AdaBoostSamme::fit(AdaBoostParams{}, x, y, 5);
  const auto back = AdaBoostSamme::from_json(nlohmann::json::parse(m.to_json().dump()));
  EXPECT_EQ(back.alphas(), m.alphas());
  for (std::size_t r = 0; r < 100; ++r) EXPECT_EQ(back.prob_bot(x.row(r)), m.prob_bot(x.row(r)));
}
