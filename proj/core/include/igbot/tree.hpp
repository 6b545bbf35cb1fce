#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "igbot/matrix.hpp"
#include "igbot/model_spec.hpp"
#include "igbot/random.hpp"

namespace igbot {

struct TreeOptions {
  Criterion criterion = Criterion::gini;
  Splitter splitter = Splitter::best;
  std::optional<int> max_depth;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  std::optional<double> min_impurity_split;  // ignored unless within [0, 1]
  std::optional<std::size_t> max_features;   // features examined per node; unset = all
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // rows with x[feature] <= threshold go left
  int left = -1;
  int right = -1;
  double weight = 0.0;      // total sample weight reaching the node
  double bot_weight = 0.0;  // weight of class kBot reaching the node
  double impurity = 0.0;
  std::size_t samples = 0;

  bool is_leaf() const { return feature < 0; }
  double prob_bot() const { return weight > 0.0 ? bot_weight / weight : 0.5; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Binary-class CART tree over weighted samples. Impurity is Gini or base-2
// entropy, so both criteria live in [0, 1] for two classes.
class DecisionTree {
 public:
  // Rows with zero weight are ignored. `weights` may be empty (all ones).
  static DecisionTree fit(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                          const TreeOptions& options, Rng& rng);

  double prob_bot(std::span<const double> row) const { return leaf_for(row).prob_bot(); }
  const TreeNode& leaf_for(std::span<const double> row) const;

  // Weighted impurity decrease per feature, normalized to sum 1 (all zeros
  // when the tree has no split).
  std::vector<double> importance() const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t depth() const;

  nlohmann::ordered_json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t n_features_ = 0;
};

double node_impurity(Criterion criterion, double weight, double bot_weight);

}  // namespace igbot
