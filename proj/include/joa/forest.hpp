#pragma once

// Indexed segment tree forest.
//
// A built segment tree is cut at a chosen depth. Nodes at that depth, plus
// childless nodes above it, are kept; each kept node roots a short segment
// tree. Intervals stored above the cut are pushed down onto the kept nodes of
// their subtree, so the kept nodes alone answer every query. Kept nodes are
// chained left to right (forward/backward) and bucketed by
// floor(low / preset_value). Buckets holding several kept nodes get a balanced
// BST of artificial parents; the BST root (or the lone kept node) is what the
// index map points at.

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "joa/interval.hpp"
#include "joa/segment_tree.hpp"

namespace joa {

using HashIndex = std::uint64_t;
using IndexMap = std::map<HashIndex, NodeId>;

inline HashIndex hash_index(Position low, Position preset_value) {
  if (preset_value == 0) throw std::invalid_argument("hash_index: preset value must be >= 1");
  return low / preset_value;
}

/// Largest key strictly below `i`.
inline std::optional<HashIndex> get_lower_index(const IndexMap& map, HashIndex i) {
  auto it = map.lower_bound(i);
  if (it == map.begin()) return std::nullopt;
  return std::prev(it)->first;
}

/// Smallest key strictly above `i`.
inline std::optional<HashIndex> get_higher_index(const IndexMap& map, HashIndex i) {
  auto it = map.upper_bound(i);
  if (it == map.end()) return std::nullopt;
  return it->first;
}

/// Smallest depth d whose cumulative stored count (depths 0..d) exceeds
/// percentage% of the stored intervals, plus one; capped at the tree height.
template <ClosedRange T>
std::uint32_t decide_cutoff(const SegmentTree<T>& tree, double percentage) {
  if (tree.empty()) throw std::invalid_argument("decide_cutoff: empty tree");
  if (!(percentage > 0.0)) throw std::invalid_argument("decide_cutoff: percentage must be > 0");
  std::vector<std::size_t> per_depth(tree.height() + 1, 0);
  for (const TreeNode& n : tree.nodes()) per_depth[n.depth] += n.canonical.size();

  const double threshold = percentage / 100.0 * static_cast<double>(tree.size());
  std::size_t cumulative = 0;
  for (std::uint32_t d = 0; d <= tree.height(); ++d) {
    cumulative += per_depth[d];
    if (static_cast<double>(cumulative) > threshold) return std::min(d + 1, tree.height());
  }
  return tree.height();
}

struct ForestNode {
  Span span;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  std::vector<ItemId> canonical;
  NodeId forward = kNoNode;
  NodeId backward = kNoNode;
  /// Original segment tree node kept in the forest.
  bool linked = false;
  /// Synthetic BST parent; never stores intervals.
  bool artificial = false;
};

struct ForestStats {
  std::uint32_t original_height = 0;
  std::uint32_t cutoff_depth = 0;
  /// Cut-off measured upward from the deepest level.
  std::uint32_t cutoff_from_leaves = 0;
  std::size_t moved_count = 0;
  std::size_t kept_nodes = 0;
  std::size_t index_count = 0;
  double nodes_per_index_mean = 0;
  double nodes_per_index_sd = 0;
  double bst_height_mean = 0;
  std::uint32_t bst_height_max = 0;
};

template <ClosedRange T>
class IndexedSegmentForest {
 public:
  IndexedSegmentForest() : items_(std::make_shared<const std::vector<T>>()) {}

  IndexedSegmentForest(const SegmentTree<T>& tree, Position preset_value, double percentage)
      : IndexedSegmentForest(tree, preset_value,
                             tree.empty() ? 0 : decide_cutoff(tree, percentage), CutoffTag{}) {}

  /// Cuts at an explicit depth instead of deriving it from a percentage.
  static IndexedSegmentForest with_cutoff(const SegmentTree<T>& tree, Position preset_value,
                                          std::uint32_t cutoff_depth) {
    return IndexedSegmentForest(tree, preset_value, cutoff_depth, CutoffTag{});
  }

  bool empty() const { return chain_.empty(); }
  Position preset_value() const { return preset_; }
  const IndexMap& index_map() const { return index_map_; }
  NodeId chain_head() const { return chain_.empty() ? kNoNode : chain_.front(); }
  /// Kept nodes in left-to-right order.
  const std::vector<NodeId>& chain() const { return chain_; }
  std::uint32_t cutoff_depth() const { return cutoff_; }
  std::size_t moved_count() const { return moved_; }
  std::uint32_t original_height() const { return original_height_; }

  std::span<const ForestNode> nodes() const { return nodes_; }
  const ForestNode& node(NodeId id) const { return nodes_[id]; }
  const std::vector<T>& items() const { return *items_; }
  const T& item(ItemId id) const { return (*items_)[id]; }

  NodeId find_rightmost_linked(NodeId id) const {
    while (!nodes_[id].linked) id = nodes_[id].right;
    return id;
  }

  NodeId find_leftmost_linked(NodeId id) const {
    while (!nodes_[id].linked) id = nodes_[id].left;
    return id;
  }

  /// Height of everything reachable from `id`: artificial levels plus the
  /// short segment trees under the kept nodes. A lone leaf has height 0.
  std::uint32_t subtree_height(NodeId id) const {
    const ForestNode& n = nodes_[id];
    std::uint32_t h = 0;
    if (n.left != kNoNode) h = std::max(h, subtree_height(n.left) + 1);
    if (n.right != kNoNode) h = std::max(h, subtree_height(n.right) + 1);
    return h;
  }

  /// Number of kept nodes under a BST root.
  std::size_t linked_count(NodeId id) const {
    const ForestNode& n = nodes_[id];
    if (n.linked) return 1;
    return linked_count(n.left) + linked_count(n.right);
  }

  ForestStats stats() const {
    ForestStats s;
    s.original_height = original_height_;
    s.cutoff_depth = cutoff_;
    s.cutoff_from_leaves = original_height_ - cutoff_;
    s.moved_count = moved_;
    s.kept_nodes = chain_.size();
    s.index_count = index_map_.size();
    if (index_map_.empty()) return s;
    double sum = 0, sum_sq = 0, height_sum = 0;
    for (const auto& [index, root] : index_map_) {
      const double k = static_cast<double>(linked_count(root));
      sum += k;
      sum_sq += k * k;
      const std::uint32_t h = subtree_height(root);
      height_sum += h;
      s.bst_height_max = std::max(s.bst_height_max, h);
    }
    const double count = static_cast<double>(index_map_.size());
    s.nodes_per_index_mean = sum / count;
    s.nodes_per_index_sd = std::sqrt(std::max(0.0, sum_sq / count - s.nodes_per_index_mean * s.nodes_per_index_mean));
    s.bst_height_mean = height_sum / count;
    return s;
  }

 private:
  struct CutoffTag {};

  IndexedSegmentForest(const SegmentTree<T>& tree, Position preset_value,
                       std::uint32_t cutoff_depth, CutoffTag)
      : items_(tree.shared_items()),
        preset_(preset_value),
        cutoff_(cutoff_depth),
        original_height_(tree.height()) {
    if (preset_value < 1) throw std::invalid_argument("forest: preset value must be >= 1");
    if (tree.empty()) return;
    if (cutoff_ > original_height_) throw std::invalid_argument("forest: cut-off below the deepest level");
    nodes_.reserve(tree.nodes().size() + tree.leaf_count());
    for (const TreeNode& n : tree.nodes()) {
      nodes_.push_back(ForestNode{n.span, n.left, n.right, n.canonical});
    }
    std::vector<ItemId> pending;
    select_and_relocate(tree, tree.root(), pending);
    link_chain();
    build_index();
  }

  // Walks the tree left to right. Nodes above the cut-off with children hand
  // their intervals down to every kept node beneath them.
  void select_and_relocate(const SegmentTree<T>& tree, NodeId id, std::vector<ItemId>& pending) {
    const TreeNode& src = tree.node(id);
    ForestNode& dst = nodes_[id];
    if (src.depth == cutoff_ || !src.has_children()) {
      dst.canonical.insert(dst.canonical.end(), pending.begin(), pending.end());
      dst.linked = true;
      chain_.push_back(id);
      return;
    }
    const std::size_t mark = pending.size();
    moved_ += dst.canonical.size();
    pending.insert(pending.end(), dst.canonical.begin(), dst.canonical.end());
    dst.canonical.clear();
    dst.canonical.shrink_to_fit();
    if (src.left != kNoNode) select_and_relocate(tree, src.left, pending);
    if (src.right != kNoNode) select_and_relocate(tree, src.right, pending);
    pending.resize(mark);
  }

  void link_chain() {
    for (std::size_t i = 0; i + 1 < chain_.size(); ++i) {
      nodes_[chain_[i]].forward = chain_[i + 1];
      nodes_[chain_[i + 1]].backward = chain_[i];
    }
  }

  void build_index() {
    std::size_t begin = 0;
    while (begin < chain_.size()) {
      const HashIndex index = hash_index(nodes_[chain_[begin]].span.low, preset_);
      std::size_t end = begin + 1;
      while (end < chain_.size() && hash_index(nodes_[chain_[end]].span.low, preset_) == index) ++end;
      index_map_.emplace(index, build_bst(begin, end));
      begin = end;
    }
  }

  // Balanced BST over chain_[begin, end): kept nodes are the leaves.
  NodeId build_bst(std::size_t begin, std::size_t end) {
    if (end - begin == 1) return chain_[begin];
    const std::size_t mid = begin + (end - begin + 1) / 2;
    const NodeId left = build_bst(begin, mid);
    const NodeId right = build_bst(mid, end);
    ForestNode parent;
    parent.span = Span{nodes_[left].span.low, nodes_[right].span.high};
    parent.left = left;
    parent.right = right;
    parent.artificial = true;
    nodes_.push_back(std::move(parent));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  std::shared_ptr<const std::vector<T>> items_;
  std::vector<ForestNode> nodes_;
  std::vector<NodeId> chain_;
  IndexMap index_map_;
  Position preset_ = 1;
  std::uint32_t cutoff_ = 0;
  std::size_t moved_ = 0;
  std::uint32_t original_height_ = 0;
};

}  // namespace joa
