#include "igbot/tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace igbot {

double node_impurity(Criterion criterion, double weight, double bot_weight) {
  if (weight <= 0.0) return 0.0;
  const double p1 = std::clamp(bot_weight / weight, 0.0, 1.0);
  const double p0 = 1.0 - p1;
  if (criterion == Criterion::gini) return 1.0 - p0 * p0 - p1 * p1;
  double h = 0.0;
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  return h;
}

namespace {

struct Candidate {
  int feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // weighted child impurity reduction proxy, larger is better
};

class Builder {
 public:
  Builder(const Matrix& x, std::span<const int> y, std::vector<double> w, const TreeOptions& opt,
          Rng& rng)
      : x_(x), y_(y), w_(std::move(w)), opt_(opt), rng_(rng) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < x_.rows(); ++i) {
      if (w_[i] > 0.0) rows.push_back(i);
    }
    if (rows.empty()) throw std::invalid_argument("DecisionTree::fit: no rows with positive weight");
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::vector<std::size_t>& rows, int depth) {
    TreeNode node;
    for (auto r : rows) {
      node.weight += w_[r];
      if (y_[r] == kBot) node.bot_weight += w_[r];
    }
    node.samples = rows.size();
    node.impurity = node_impurity(opt_.criterion, node.weight, node.bot_weight);
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);

    if (!splittable(node, depth)) return id;
    const Candidate best = opt_.splitter == Splitter::best ? best_split(rows, node)
                                                           : random_split(rows, node);
    if (best.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (x_(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  bool splittable(const TreeNode& node, int depth) const {
    if (opt_.max_depth && depth >= *opt_.max_depth) return false;
    if (node.samples < static_cast<std::size_t>(opt_.min_samples_split)) return false;
    if (node.samples < 2 * static_cast<std::size_t>(opt_.min_samples_leaf)) return false;
    if (node.impurity <= 0.0) return false;
    if (opt_.min_impurity_split && *opt_.min_impurity_split >= 0.0 &&
        *opt_.min_impurity_split <= 1.0 && node.impurity <= *opt_.min_impurity_split) {
      return false;
    }
    return true;
  }

  std::vector<std::size_t> candidate_features() {
    auto features = shuffled_indices(x_.cols(), rng_);
    if (opt_.max_features && *opt_.max_features < features.size()) {
      features.resize(*opt_.max_features);
    }
    return features;
  }

  double child_score(const TreeNode& node, double lw, double lb) const {
    const double rw = node.weight - lw;
    const double rb = node.bot_weight - lb;
    const double children = lw * node_impurity(opt_.criterion, lw, lb) +
                            rw * node_impurity(opt_.criterion, rw, rb);
    return node.weight * node.impurity - children;
  }

  Candidate best_split(const std::vector<std::size_t>& rows, const TreeNode& node) {
    Candidate best;
    const std::size_t min_leaf = static_cast<std::size_t>(opt_.min_samples_leaf);
    std::vector<std::pair<double, std::size_t>> sorted(rows.size());
    for (auto f : candidate_features()) {
      for (std::size_t i = 0; i < rows.size(); ++i) sorted[i] = {x_(rows[i], f), rows[i]};
      std::sort(sorted.begin(), sorted.end());
      double lw = 0.0, lb = 0.0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        const auto r = sorted[i].second;
        lw += w_[r];
        if (y_[r] == kBot) lb += w_[r];
        if (sorted[i].first == sorted[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        if (n_left < min_leaf || sorted.size() - n_left < min_leaf) continue;
        const double score = child_score(node, lw, lb);
        if (score > best.score) {
          double t = 0.5 * (sorted[i].first + sorted[i + 1].first);
          if (t >= sorted[i + 1].first) t = sorted[i].first;
          best = {static_cast<int>(f), t, score};
        }
      }
    }
    return best;
  }

  Candidate random_split(const std::vector<std::size_t>& rows, const TreeNode& node) {
    Candidate best;
    const std::size_t min_leaf = static_cast<std::size_t>(opt_.min_samples_leaf);
    for (auto f : candidate_features()) {
      double lo = x_(rows.front(), f), hi = lo;
      for (auto r : rows) {
        lo = std::min(lo, x_(r, f));
        hi = std::max(hi, x_(r, f));
      }
      if (!(hi > lo)) continue;
      double t = lo + uniform01(rng_) * (hi - lo);
      if (t >= hi) t = lo;
      double lw = 0.0, lb = 0.0;
      std::size_t n_left = 0;
      for (auto r : rows) {
        if (x_(r, f) <= t) {
          ++n_left;
          lw += w_[r];
          if (y_[r] == kBot) lb += w_[r];
        }
      }
      if (n_left < min_leaf || rows.size() - n_left < min_leaf) continue;
      const double score = child_score(node, lw, lb);
      if (score > best.score) best = {static_cast<int>(f), t, score};
    }
    return best;
  }

  const Matrix& x_;
  std::span<const int> y_;
  std::vector<double> w_;
  const TreeOptions& opt_;
  Rng& rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree DecisionTree::fit(const Matrix& x, std::span<const int> y,
                               std::span<const double> weights, const TreeOptions& options,
                               Rng& rng) {
  if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("DecisionTree::fit: empty input");
  if (y.size() != x.rows()) throw std::invalid_argument("DecisionTree::fit: label count mismatch");
  if (!weights.empty() && weights.size() != x.rows()) {
    throw std::invalid_argument("DecisionTree::fit: weight count mismatch");
  }
  std::vector<double> w = weights.empty() ? std::vector<double>(x.rows(), 1.0)
                                          : std::vector<double>(weights.begin(), weights.end());
  DecisionTree tree;
  tree.n_features_ = x.cols();
  tree.nodes_ = Builder(x, y, std::move(w), options, rng).build();
  return tree;
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> row) const {
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf()) {
    node = &nodes_[static_cast<std::size_t>(
        row[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right)];
  }
  return *node;
}

std::vector<double> DecisionTree::importance() const {
  std::vector<double> imp(n_features_, 0.0);
  const double total = nodes_.front().weight;
  for (const auto& node : nodes_) {
    if (node.is_leaf()) continue;
    const auto& l = nodes_[static_cast<std::size_t>(node.left)];
    const auto& r = nodes_[static_cast<std::size_t>(node.right)];
    const double decrease = node.weight * node.impurity - l.weight * l.impurity - r.weight * r.impurity;
    imp[static_cast<std::size_t>(node.feature)] += std::max(0.0, decrease) / total;
  }
  double sum = 0.0;
  for (double v : imp) sum += v;
  if (sum > 0.0) {
    for (double& v : imp) v /= sum;
  }
  return imp;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

nlohmann::ordered_json DecisionTree::to_json() const {
  nlohmann::ordered_json j;
  j["n_features"] = n_features_;
  auto& arr = j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : nodes_) {
    arr.push_back({n.feature, n.threshold, n.left, n.right, n.weight, n.bot_weight, n.impurity,
                   n.samples});
  }
  return j;
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  DecisionTree t;
  t.n_features_ = j.at("n_features").get<std::size_t>();
  for (const auto& a : j.at("nodes")) {
    TreeNode n;
    n.feature = a.at(0).get<int>();
    n.threshold = a.at(1).get<double>();
    n.left = a.at(2).get<int>();
    n.right = a.at(3).get<int>();
    n.weight = a.at(4).get<double>();
    n.bot_weight = a.at(5).get<double>();
    n.impurity = a.at(6).get<double>();
    n.samples = a.at(7).get<std::size_t>();
    t.nodes_.push_back(n);
  }
  if (t.nodes_.empty()) throw std::invalid_argument("tree has no nodes");
  return t;
}

}  // namespace igbot
