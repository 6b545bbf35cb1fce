#include "igbot/ball_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace igbot {

double distance(Distance metric, std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  if (metric == Distance::manhattan) {
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

namespace {

// Keeps the k best neighbors as a max-heap on (distance, index).
void offer(std::vector<Neighbor>& heap, std::size_t k, Neighbor candidate) {
  if (heap.size() < k) {
    heap.push_back(candidate);
    std::push_heap(heap.begin(), heap.end());
  } else if (candidate < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = candidate;
    std::push_heap(heap.begin(), heap.end());
  }
}

}  // namespace

std::vector<Neighbor> brute_force_neighbors(const Matrix& points, std::span<const double> query,
                                            std::size_t k, Distance metric) {
  std::vector<Neighbor> heap;
  heap.reserve(k + 1);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    offer(heap, k, {i, distance(metric, points.row(i), query)});
  }
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

BallTree::BallTree(Matrix points, std::size_t leaf_size, Distance metric)
    : points_(std::move(points)), leaf_size_(std::max<std::size_t>(1, leaf_size)), metric_(metric) {
  if (points_.rows() == 0) throw std::invalid_argument("BallTree: no points");
  order_.resize(points_.rows());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(2 * points_.rows() / leaf_size_ + 1);
  build(0, points_.rows());
}

int BallTree::build(std::size_t begin, std::size_t end) {
  const std::size_t d = points_.cols();
  std::vector<double> centroid(d, 0.0);
  for (std::size_t i = begin; i < end; ++i) {
    auto p = points_.row(order_[i]);
    for (std::size_t c = 0; c < d; ++c) centroid[c] += p[c];
  }
  for (double& c : centroid) c /= static_cast<double>(end - begin);

  Node node{begin, end, -1, -1, 0.0};
  for (std::size_t i = begin; i < end; ++i) {
    node.radius = std::max(node.radius, distance(metric_, centroid, points_.row(order_[i])));
  }

  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  centroids_.insert(centroids_.end(), centroid.begin(), centroid.end());

  if (end - begin <= leaf_size_) return id;

  std::size_t split_dim = 0;
  double widest = -1.0;
  for (std::size_t c = 0; c < d; ++c) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = points_(order_[i], c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      split_dim = c;
    }
  }
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     const double va = points_(a, split_dim), vb = points_(b, split_dim);
                     return va < vb || (va == vb && a < b);
                   });
  const int l = build(begin, mid);
  const int r = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = l;
  nodes_[static_cast<std::size_t>(id)].right = r;
  return id;
}

void BallTree::search(int id, std::span<const double> q, std::size_t k,
                      std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const std::size_t idx = order_[i];
      offer(heap, k, {idx, distance(metric_, points_.row(idx), q)});
    }
    return;
  }
  const int children[2] = {node.left, node.right};
  double bounds[2];
  for (int c = 0; c < 2; ++c) {
    const Node& child = nodes_[static_cast<std::size_t>(children[c])];
    const double to_center = distance(metric_, centroid(children[c]), q);
    // Slack absorbs rounding in the triangle-inequality bound so that ties at
    // the current k-th distance are never pruned.
    const double slack = 1e-12 * (to_center + child.radius);
    bounds[c] = std::max(0.0, to_center - child.radius - slack);
  }
  const int first = bounds[1] < bounds[0] ? 1 : 0;
  for (int pass = 0; pass < 2; ++pass) {
    const int c = pass == 0 ? first : 1 - first;
    if (heap.size() == k && bounds[c] > heap.front().distance) continue;
    search(children[c], q, k, heap);
  }
}

std::vector<Neighbor> BallTree::query(std::span<const double> q, std::size_t k) const {
  if (q.size() != points_.cols()) throw std::invalid_argument("BallTree::query: dimension mismatch");
  std::vector<Neighbor> heap;
  if (k == 0 || nodes_.empty()) return heap;
  k = std::min(k, points_.rows());
  heap.reserve(k + 1);
  search(0, q, k, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

}  // namespace igbot
