#pragma once

// Query algorithms over an IndexedSegmentForest.
//
// A query [low, high] is hashed at both ends. The search starts from the
// bucket of `low` when it exists, otherwise from the nearest lower bucket and
// sweeps forward; failing that it starts from the bucket of `high`, otherwise
// the nearest higher bucket and sweeps backward. Kept nodes are disjoint and
// ordered, so no bucket below the nearest lower one, and none above the
// nearest higher one, can overlap the query: at most four index probes.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "joa/forest.hpp"
#include "joa/interval.hpp"
#include "joa/segment_tree.hpp"

namespace joa {

struct SearchStats {
  std::size_t index_probes = 0;
  std::size_t nodes_visited = 0;
};

/// Kept nodes entered by the forward and backward sweeps, in visit order.
struct SearchTrace {
  std::vector<NodeId> forward;
  std::vector<NodeId> backward;
};

/// Per-query state: append-only hit list plus instrumentation.
struct SearchContext {
  Span query;
  std::vector<ItemId> hits;
  SearchStats stats;
  SearchTrace* trace = nullptr;

  explicit SearchContext(Span q, SearchTrace* t = nullptr) : query(q), trace(t) {}
};

template <ClosedRange T>
void search_downward(const IndexedSegmentForest<T>& forest, NodeId id, SearchContext& ctx) {
  if (id == kNoNode || !spans_overlap(forest.node(id).span, ctx.query)) {
    throw std::logic_error("search_downward: node does not overlap the query");
  }
  detail::collect_downward<ForestNode>(forest.nodes(), id, ctx.query, ctx.hits,
                                       &ctx.stats.nodes_visited);
}

template <ClosedRange T>
void search_forward(const IndexedSegmentForest<T>& forest, NodeId id, SearchContext& ctx) {
  const Span q = ctx.query;
  while (id != kNoNode && forest.node(id).span.low <= q.high) {
    const ForestNode& n = forest.node(id);
    if (ctx.trace) ctx.trace->forward.push_back(id);
    if (q.low <= n.span.high) {
      detail::collect_downward<ForestNode>(forest.nodes(), id, q, ctx.hits, &ctx.stats.nodes_visited);
    } else {
      ++ctx.stats.nodes_visited;
    }
    id = n.forward;
  }
}

template <ClosedRange T>
void search_backward(const IndexedSegmentForest<T>& forest, NodeId id, SearchContext& ctx) {
  const Span q = ctx.query;
  while (id != kNoNode && q.low <= forest.node(id).span.high) {
    const ForestNode& n = forest.node(id);
    if (ctx.trace) ctx.trace->backward.push_back(id);
    if (n.span.low <= q.high) {
      detail::collect_downward<ForestNode>(forest.nodes(), id, q, ctx.hits, &ctx.stats.nodes_visited);
    } else {
      ++ctx.stats.nodes_visited;
    }
    id = n.backward;
  }
}

template <ClosedRange T>
void search_at_linked_node(const IndexedSegmentForest<T>& forest, NodeId id, SearchContext& ctx) {
  if (!forest.node(id).linked) throw std::logic_error("search_at_linked_node: node is not linked");
  search_forward(forest, id, ctx);
  search_backward(forest, forest.node(id).backward, ctx);
}

// Bucket root that is a collision BST: search inside it, then sweep out of
// both ends of the bucket.
template <ClosedRange T>
void search_at_bucket_root(const IndexedSegmentForest<T>& forest, NodeId id, SearchContext& ctx) {
  if (spans_overlap(ctx.query, forest.node(id).span)) search_downward(forest, id, ctx);
  search_forward(forest, forest.node(forest.find_rightmost_linked(id)).forward, ctx);
  search_backward(forest, forest.node(forest.find_leftmost_linked(id)).backward, ctx);
}

template <ClosedRange T>
void search_at_lower_node(const IndexedSegmentForest<T>& forest, NodeId id, SearchContext& ctx) {
  if (forest.node(id).linked) {
    search_forward(forest, id, ctx);
    return;
  }
  if (spans_overlap(ctx.query, forest.node(id).span)) search_downward(forest, id, ctx);
  search_forward(forest, forest.node(forest.find_rightmost_linked(id)).forward, ctx);
}

template <ClosedRange T>
void search_at_higher_node(const IndexedSegmentForest<T>& forest, NodeId id, SearchContext& ctx) {
  if (forest.node(id).linked) {
    search_backward(forest, id, ctx);
    return;
  }
  if (spans_overlap(ctx.query, forest.node(id).span)) search_downward(forest, id, ctx);
  search_backward(forest, forest.node(forest.find_leftmost_linked(id)).backward, ctx);
}

/// Runs the bucket dispatch for ctx.query, leaving raw (possibly repeated) hits in ctx.hits.
template <ClosedRange T>
void dispatch_search(const IndexedSegmentForest<T>& forest, SearchContext& ctx) {
  const IndexMap& map = forest.index_map();
  const HashIndex low_index = hash_index(ctx.query.low, forest.preset_value());
  const HashIndex high_index = hash_index(ctx.query.high, forest.preset_value());

  ++ctx.stats.index_probes;
  if (auto it = map.find(low_index); it != map.end()) {
    if (forest.node(it->second).linked) {
      search_at_linked_node(forest, it->second, ctx);
    } else {
      search_at_bucket_root(forest, it->second, ctx);
    }
    return;
  }

  ++ctx.stats.index_probes;
  if (auto lower = get_lower_index(map, low_index)) {
    search_at_lower_node(forest, map.at(*lower), ctx);
    return;
  }

  ++ctx.stats.index_probes;
  if (auto it = map.find(high_index); it != map.end()) {
    if (forest.node(it->second).linked) {
      search_at_linked_node(forest, it->second, ctx);
    } else {
      search_at_bucket_root(forest, it->second, ctx);
    }
    return;
  }

  ++ctx.stats.index_probes;
  if (auto higher = get_higher_index(map, high_index)) {
    search_at_higher_node(forest, map.at(*higher), ctx);
  }
}

/// Ids of stored intervals overlapping `query`, each instance once, ascending.
template <ClosedRange T>
std::vector<ItemId> main_search(const IndexedSegmentForest<T>& forest, Span query,
                                SearchStats* stats = nullptr, SearchTrace* trace = nullptr) {
  SearchContext ctx(query, trace);
  dispatch_search(forest, ctx);
  // Relocated intervals sit on several kept nodes and may be reached repeatedly.
  detail::sort_unique(ctx.hits);
  if (stats) *stats = ctx.stats;
  return std::move(ctx.hits);
}

/// One hit list per query, in query order.
template <ClosedRange T, ClosedRange Q>
std::vector<std::vector<ItemId>> search(std::span<const Q> queries, const IndexedSegmentForest<T>& forest) {
  std::vector<std::vector<ItemId>> out;
  out.reserve(queries.size());
  for (const Q& q : queries) out.push_back(main_search(forest, Span{q.low, q.high}));
  return out;
}

}  // namespace joa
