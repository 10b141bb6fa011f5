#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "humangen/types.hpp"

namespace hgen {

/// Exact nearest-neighbor KD-tree over 3D points. Distances are computed
/// with the same expression as a direct scan, so accelerated queries return
/// bit-identical squared distances.
class KdTree3 {
 public:
  KdTree3() = default;

  explicit KdTree3(const Points3& points) { build(points); }

  void build(const Points3& points) {
    points_ = points;
    const Eigen::Index n = points.cols();
    if (n == 0) throw std::invalid_argument("kdtree: empty point set");
    order_.resize(static_cast<std::size_t>(n));
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.clear();
    nodes_.reserve(static_cast<std::size_t>(2 * n));
    root_ = build_range(0, static_cast<Eigen::Index>(n), 0);
  }

  bool empty() const { return points_.cols() == 0; }
  const Points3& points() const { return points_; }

  struct Hit {
    Eigen::Index index = -1;
    Real dist2 = std::numeric_limits<Real>::infinity();
  };

  Hit nearest(const Vec3& query) const {
    Hit best;
    search(root_, query, best);
    return best;
  }

 private:
  struct Node {
    int axis = 0;
    Real split = 0;
    Eigen::Index point = -1;  // leaf payload start
    Eigen::Index count = 0;   // leaf payload size; 0 for interior
    int left = -1;
    int right = -1;
  };

  static constexpr Eigen::Index kLeafSize = 8;

  int build_range(Eigen::Index begin, Eigen::Index end, int depth) {
    Node node;
    if (end - begin <= kLeafSize) {
      node.point = begin;
      node.count = end - begin;
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size()) - 1;
    }
    const int axis = depth % 3;
    const Eigen::Index mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](Eigen::Index a, Eigen::Index b) {
                       return points_(axis, a) < points_(axis, b);
                     });
    node.axis = axis;
    node.split = points_(axis, order_[static_cast<std::size_t>(mid)]);
    nodes_.push_back(node);
    const int self = static_cast<int>(nodes_.size()) - 1;
    const int left = build_range(begin, mid, depth + 1);
    const int right = build_range(mid, end, depth + 1);
    nodes_[static_cast<std::size_t>(self)].left = left;
    nodes_[static_cast<std::size_t>(self)].right = right;
    return self;
  }

  Real dist2(const Vec3& q, Eigen::Index p) const {
    const Real dx = q.x() - points_(0, p);
    const Real dy = q.y() - points_(1, p);
    const Real dz = q.z() - points_(2, p);
    return dx * dx + dy * dy + dz * dz;
  }

  void search(int node_id, const Vec3& q, Hit& best) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.count > 0) {
      for (Eigen::Index i = node.point; i < node.point + node.count; ++i) {
        const Eigen::Index p = order_[static_cast<std::size_t>(i)];
        const Real d2 = dist2(q, p);
        if (d2 < best.dist2) {
          best.dist2 = d2;
          best.index = p;
        }
      }
      return;
    }
    const Real delta = q[node.axis] - node.split;
    const int near = delta < 0 ? node.left : node.right;
    const int far = delta < 0 ? node.right : node.left;
    search(near, q, best);
    if (delta * delta < best.dist2) search(far, q, best);
  }

  Points3 points_;
  std::vector<Eigen::Index> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace hgen
