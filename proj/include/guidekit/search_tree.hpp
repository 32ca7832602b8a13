#pragma once

#include <stdexcept>
#include <vector>

#include "guidekit/geometry.hpp"

namespace guidekit {

struct FailedExpansion {
  int node = -1;   // tree node the expansion started from
  Pose attempted;  // pose the expansion tried to reach
};

/// Rooted search tree over configurations. Nodes are append-only; node 0 is
/// the start. Stores parent links, edge costs, root costs and the log of
/// failed expansions.
class SearchTree {
 public:
  explicit SearchTree(const Pose& root) {
    poses_.push_back(root);
    parent_.push_back(-1);
    edge_cost_.push_back(0.0);
    cost_from_root_.push_back(0.0);
    depth_.push_back(0);
  }

  int add_child(int parent, const Pose& pose, double edge_cost) {
    check_index(parent);
    if (edge_cost < 0.0) throw std::invalid_argument("SearchTree: negative edge cost");
    poses_.push_back(pose);
    parent_.push_back(parent);
    edge_cost_.push_back(edge_cost);
    cost_from_root_.push_back(cost_from_root_[static_cast<size_t>(parent)] + edge_cost);
    depth_.push_back(depth_[static_cast<size_t>(parent)] + 1);
    return static_cast<int>(poses_.size()) - 1;
  }

  int size() const { return static_cast<int>(poses_.size()); }
  const Pose& pose(int v) const { check_index(v); return poses_[static_cast<size_t>(v)]; }
  int parent(int v) const { check_index(v); return parent_[static_cast<size_t>(v)]; }
  double edge_cost(int v) const { check_index(v); return edge_cost_[static_cast<size_t>(v)]; }
  double cost_from_root(int v) const {
    check_index(v);
    return cost_from_root_[static_cast<size_t>(v)];
  }
  int depth(int v) const { check_index(v); return depth_[static_cast<size_t>(v)]; }

  void log_failed(int node, const Pose& attempted) {
    check_index(node);
    failed_.push_back({node, attempted});
  }
  const std::vector<FailedExpansion>& failed_expansions() const { return failed_; }

 private:
  void check_index(int v) const {
    if (v < 0 || v >= size()) throw std::out_of_range("SearchTree: node index out of range");
  }

  std::vector<Pose> poses_;
  std::vector<int> parent_;
  std::vector<double> edge_cost_;
  std::vector<double> cost_from_root_;
  std::vector<int> depth_;
  std::vector<FailedExpansion> failed_;
};

/// Path length between two nodes through the tree (via their lowest common
/// ancestor). tree_distance(root, v) equals cost_from_root(v).
inline double tree_distance(const SearchTree& tree, int u, int v) {
  double total = 0.0;
  while (tree.depth(u) > tree.depth(v)) {
    total += tree.edge_cost(u);
    u = tree.parent(u);
  }
  while (tree.depth(v) > tree.depth(u)) {
    total += tree.edge_cost(v);
    v = tree.parent(v);
  }
  while (u != v) {
    total += tree.edge_cost(u) + tree.edge_cost(v);
    u = tree.parent(u);
    v = tree.parent(v);
  }
  return total;
}

/// Root-to-leaf pose sequence.
inline std::vector<Pose> extract_path(const SearchTree& tree, int leaf) {
  if (leaf < 0 || leaf >= tree.size())
    throw std::out_of_range("extract_path: leaf index out of range");
  std::vector<Pose> path;
  for (int v = leaf; v != -1; v = tree.parent(v)) path.push_back(tree.pose(v));
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace guidekit
