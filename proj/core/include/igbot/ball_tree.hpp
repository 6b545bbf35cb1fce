#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "igbot/matrix.hpp"
#include "igbot/model_spec.hpp"

namespace igbot {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;

  // Neighbors order by distance, then by lower training index.
  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

double distance(Distance metric, std::span<const double> a, std::span<const double> b);

// Exhaustive scan; the reference the ball tree must agree with.
std::vector<Neighbor> brute_force_neighbors(const Matrix& points, std::span<const double> query,
                                            std::size_t k, Distance metric);

// Metric ball tree. Nodes are bounded by a centroid and covering radius, and
// subtrees are pruned with the triangle inequality, so any metric works.
class BallTree {
 public:
  BallTree() = default;
  BallTree(Matrix points, std::size_t leaf_size, Distance metric);

  // The k nearest training points sorted by (distance, index); identical to
  // brute_force_neighbors.
  std::vector<Neighbor> query(std::span<const double> q, std::size_t k) const;

  const Matrix& points() const { return points_; }
  std::size_t leaf_size() const { return leaf_size_; }
  Distance metric() const { return metric_; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    int left = -1;
    int right = -1;
    double radius = 0.0;
  };

  int build(std::size_t begin, std::size_t end);
  void search(int node, std::span<const double> q, std::size_t k,
              std::vector<Neighbor>& heap) const;

  Matrix points_;
  std::span<const double> centroid(int node) const {
    return {centroids_.data() + static_cast<std::size_t>(node) * points_.cols(), points_.cols()};
  }

  std::vector<double> centroids_;  // node-major, points_.cols() per node
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_ = 10;
  Distance metric_ = Distance::manhattan;
};

}  // namespace igbot
