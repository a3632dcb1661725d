#pragma once

// Static segment tree over closed integer intervals.
//
// Leaves are the elementary intervals induced by the sorted distinct endpoints
// p1 < p2 < ... < pm, realized on the integer grid as
//   [p1,p1], [p1+1,p2-1], [p2,p2], ..., [pm,pm]
// with empty gap ranges omitted. Internal nodes are built bottom-up by pairing
// consecutive nodes of a level; an unpaired rightmost node is promoted as is.
// Each stored interval s is attached to the canonical subset of every node v
// with Int(v) inside s and Int(parent(v)) not inside s.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "joa/interval.hpp"

namespace joa {

using NodeId = std::uint32_t;
using ItemId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct TreeNode {
  Span span;
  NodeId left = kNoNode;
  NodeId right = kNoNode;
  std::uint32_t depth = 0;
  std::vector<ItemId> canonical;

  bool has_children() const { return left != kNoNode || right != kNoNode; }
};

namespace detail {

// Emits the canonical subset of `id` and recurses into children that can still
// overlap `q`. Caller guarantees nodes[id] overlaps q. Works on any node type
// exposing span/left/right/canonical.
template <class Node>
void collect_downward(std::span<const Node> nodes, NodeId id, Span q, std::vector<ItemId>& out,
                      std::size_t* visited = nullptr) {
  const Node& node = nodes[id];
  if (visited) ++*visited;
  out.insert(out.end(), node.canonical.begin(), node.canonical.end());
  if (node.left != kNoNode && q.low <= nodes[node.left].span.high) {
    collect_downward(nodes, node.left, q, out, visited);
  }
  if (node.right != kNoNode && nodes[node.right].span.low <= q.high) {
    collect_downward(nodes, node.right, q, out, visited);
  }
}

inline void sort_unique(std::vector<ItemId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

}  // namespace detail

template <ClosedRange T>
class SegmentTree {
 public:
  SegmentTree() : items_(std::make_shared<const std::vector<T>>()) {}

  /// Builds the tree over `items`. Items carrying a `chrom` member must agree on it.
  explicit SegmentTree(std::vector<T> items) {
    if (items.size() >= std::numeric_limits<ItemId>::max()) {
      throw std::length_error("segment tree: too many intervals");
    }
    check_single_chromosome(items);
    for (const T& item : items) {
      if (item.low > item.high) throw std::invalid_argument("segment tree: interval with low > high");
    }
    items_ = std::make_shared<const std::vector<T>>(std::move(items));
    build_skeleton();
    assign_depths();
    for (ItemId i = 0; i < items_->size(); ++i) insert(root_, i);
  }

  bool empty() const { return root_ == kNoNode; }
  NodeId root() const { return root_; }
  /// Number of stored interval instances.
  std::size_t size() const { return items_->size(); }
  /// Largest node depth, root at depth 0.
  std::uint32_t height() const { return height_; }
  std::size_t leaf_count() const { return leaf_count_; }

  std::span<const TreeNode> nodes() const { return nodes_; }
  const TreeNode& node(NodeId id) const { return nodes_[id]; }
  const std::vector<T>& items() const { return *items_; }
  const T& item(ItemId id) const { return (*items_)[id]; }
  std::shared_ptr<const std::vector<T>> shared_items() const { return items_; }

  /// Total number of canonical-subset attachments across all nodes.
  std::size_t canonical_total() const {
    std::size_t total = 0;
    for (const TreeNode& n : nodes_) total += n.canonical.size();
    return total;
  }

  /// Ids of stored intervals containing `q`, found along one root-to-leaf path.
  std::vector<ItemId> stab(Position q) const {
    std::vector<ItemId> out;
    NodeId id = root_;
    while (id != kNoNode) {
      const TreeNode& n = nodes_[id];
      if (q < n.span.low || q > n.span.high) break;
      out.insert(out.end(), n.canonical.begin(), n.canonical.end());
      if (n.left != kNoNode && q <= nodes_[n.left].span.high) {
        id = n.left;
      } else {
        id = n.right;
      }
    }
    return out;
  }

  /// Ids of stored intervals overlapping `q`, each instance once, ascending.
  std::vector<ItemId> query_overlap(Span q, std::size_t* visited = nullptr) const {
    std::vector<ItemId> out;
    if (empty() || !spans_overlap(nodes_[root_].span, q)) return out;
    detail::collect_downward<TreeNode>(nodes_, root_, q, out, visited);
    // An interval split over several canonical nodes can be reached more than once.
    detail::sort_unique(out);
    return out;
  }

 private:
  static void check_single_chromosome(const std::vector<T>& items) {
    if constexpr (requires(const T& t) { t.chrom; }) {
      for (const T& item : items) {
        if (item.chrom != items.front().chrom) {
          throw std::invalid_argument("segment tree: intervals span several chromosomes (" +
                                      items.front().chrom + ", " + item.chrom + ")");
        }
      }
    }
  }

  void build_skeleton() {
    std::vector<Position> points;
    points.reserve(items_->size() * 2);
    for (const T& item : *items_) {
      points.push_back(item.low);
      points.push_back(item.high);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.empty()) return;

    std::vector<NodeId> level;
    level.reserve(points.size() * 2);
    auto add_leaf = [&](Position lo, Position hi) {
      nodes_.push_back(TreeNode{Span{lo, hi}});
      level.push_back(static_cast<NodeId>(nodes_.size() - 1));
    };
    for (std::size_t i = 0; i < points.size(); ++i) {
      add_leaf(points[i], points[i]);
      if (i + 1 < points.size() && points[i] + 1 < points[i + 1]) {
        add_leaf(points[i] + 1, points[i + 1] - 1);
      }
    }
    leaf_count_ = level.size();

    while (level.size() > 1) {
      std::vector<NodeId> next;
      next.reserve(level.size() / 2 + 1);
      for (std::size_t j = 0; j < level.size(); j += 2) {
        if (j + 1 == level.size()) {
          next.push_back(level[j]);
          break;
        }
        TreeNode parent;
        parent.span = Span{nodes_[level[j]].span.low, nodes_[level[j + 1]].span.high};
        parent.left = level[j];
        parent.right = level[j + 1];
        nodes_.push_back(std::move(parent));
        next.push_back(static_cast<NodeId>(nodes_.size() - 1));
      }
      level = std::move(next);
    }
    root_ = level.front();
  }

  void assign_depths() {
    if (root_ == kNoNode) return;
    std::vector<NodeId> stack{root_};
    nodes_[root_].depth = 0;
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      const std::uint32_t d = nodes_[id].depth;
      height_ = std::max(height_, d);
      for (NodeId child : {nodes_[id].left, nodes_[id].right}) {
        if (child == kNoNode) continue;
        nodes_[child].depth = d + 1;
        stack.push_back(child);
      }
    }
  }

  void insert(NodeId id, ItemId item_id) {
    const T& s = (*items_)[item_id];
    TreeNode& n = nodes_[id];
    if (contains(s, n.span)) {
      n.canonical.push_back(item_id);
      return;
    }
    const NodeId left = n.left;
    const NodeId right = n.right;
    if (left != kNoNode && spans_overlap(nodes_[left].span, s)) insert(left, item_id);
    if (right != kNoNode && spans_overlap(nodes_[right].span, s)) insert(right, item_id);
  }

  std::shared_ptr<const std::vector<T>> items_;
  std::vector<TreeNode> nodes_;
  NodeId root_ = kNoNode;
  std::uint32_t height_ = 0;
  std::size_t leaf_count_ = 0;
};

}  // namespace joa
