#pragma once

// n-way joint overlap by divide and conquer.
//
// Per chromosome, the list of input sets is split at its midpoint until one or
// two sets remain. One set yields its own intervals; two sets (and every
// combine step above them) build an index over the smaller side, query it with
// the larger one, and emit one record per overlapping pair: the intersected
// region plus the union of both contributor lists. After the last combine every
// record has one contributor from each input set.
//
// Chromosomes and plan subtrees run as independent tasks; a combine waits for
// both of its children. Output is sorted with a total order, so the worker
// count never changes the result.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <tbb/parallel_for.h>
#include <tbb/parallel_invoke.h>
#include <tbb/task_arena.h>

#include "joa/bed_io.hpp"
#include "joa/forest.hpp"
#include "joa/forest_search.hpp"
#include "joa/interval.hpp"
#include "joa/segment_tree.hpp"

namespace joa {

enum class PlanShape { Midpoint, LeftFold };

/// Index statistics gathered while joining one chromosome.
struct ChromMetrics {
  std::vector<std::uint32_t> sources;  // input sets that contain the chromosome
  std::size_t indexes_built = 0;
  std::size_t stored_intervals = 0;
  std::uint32_t max_tree_height = 0;
  std::uint32_t max_cutoff_depth = 0;
  std::size_t hash_indexes = 0;
  std::uint32_t max_bst_height = 0;
  std::size_t moved_count = 0;
  std::size_t records = 0;

  void absorb(const ChromMetrics& o) {
    indexes_built += o.indexes_built;
    stored_intervals += o.stored_intervals;
    max_tree_height = std::max(max_tree_height, o.max_tree_height);
    max_cutoff_depth = std::max(max_cutoff_depth, o.max_cutoff_depth);
    hash_indexes += o.hash_indexes;
    max_bst_height = std::max(max_bst_height, o.max_bst_height);
    moved_count += o.moved_count;
  }
};

struct JoinMetrics {
  /// Summed over all tasks, so may exceed wall time when running in parallel.
  std::chrono::nanoseconds construct{0};
  std::chrono::nanoseconds query{0};
  std::map<std::string, ChromMetrics> per_chrom;
};

struct StepResult {
  std::vector<OverlapRecord> records;
  std::chrono::nanoseconds construct{0};
  std::chrono::nanoseconds query{0};
  ChromMetrics metrics;

  void absorb_costs(const StepResult& child) {
    construct += child.construct;
    query += child.query;
    metrics.absorb(child.metrics);
  }
};

/// Joins two partial results for one chromosome.
inline StepResult combine(const std::vector<OverlapRecord>& a, const std::vector<OverlapRecord>& b,
                          const RunConfig& config) {
  using Clock = std::chrono::steady_clock;
  StepResult out;
  if (a.empty() || b.empty()) return out;
  const bool index_a = a.size() <= b.size();
  const std::vector<OverlapRecord>& indexed = index_a ? a : b;
  const std::vector<OverlapRecord>& queries = index_a ? b : a;

  auto emit = [&](const OverlapRecord& q, const OverlapRecord& hit) {
    out.records.push_back(index_a ? combine_records(hit, q) : combine_records(q, hit));
  };

  auto t0 = Clock::now();
  SegmentTree<OverlapRecord> tree(indexed);
  out.metrics.indexes_built = 1;
  out.metrics.stored_intervals = indexed.size();
  out.metrics.max_tree_height = tree.height();

  if (config.method == IndexMethod::SegmentTree) {
    auto t1 = Clock::now();
    out.construct = t1 - t0;
    for (const OverlapRecord& q : queries) {
      for (ItemId id : tree.query_overlap(Span{q.low, q.high})) emit(q, tree.item(id));
    }
    out.query = Clock::now() - t1;
    return out;
  }

  IndexedSegmentForest<OverlapRecord> forest(tree, config.preset_value, config.percentage);
  auto t1 = Clock::now();
  out.construct = t1 - t0;
  const ForestStats fs = forest.stats();
  out.metrics.max_cutoff_depth = fs.cutoff_depth;
  out.metrics.hash_indexes = fs.index_count;
  out.metrics.max_bst_height = fs.bst_height_max;
  out.metrics.moved_count = fs.moved_count;
  for (const OverlapRecord& q : queries) {
    for (ItemId id : main_search(forest, Span{q.low, q.high})) emit(q, forest.item(id));
  }
  out.query = Clock::now() - t1;
  return out;
}

namespace detail {

inline std::vector<OverlapRecord> leaf_records(const IntervalSet& set, const std::string& chrom) {
  std::vector<OverlapRecord> out;
  auto it = set.per_chrom.find(chrom);
  if (it == set.per_chrom.end()) return out;
  out.reserve(it->second.size());
  for (const GenomicInterval& iv : it->second) out.push_back(to_record(iv));
  return out;
}

inline StepResult join_range(const std::vector<IntervalSet>& sets, const std::string& chrom,
                             std::size_t begin, std::size_t end, const RunConfig& config) {
  if (end - begin == 1) return StepResult{leaf_records(sets[begin], chrom)};
  if (end - begin == 2) {
    return combine(leaf_records(sets[begin], chrom), leaf_records(sets[begin + 1], chrom), config);
  }
  const std::size_t mid = begin + (end - begin) / 2;
  StepResult left, right;
  tbb::parallel_invoke([&] { left = join_range(sets, chrom, begin, mid, config); },
                       [&] { right = join_range(sets, chrom, mid, end, config); });
  StepResult out = combine(left.records, right.records, config);
  out.absorb_costs(left);
  out.absorb_costs(right);
  return out;
}

inline StepResult join_left_fold(const std::vector<IntervalSet>& sets, const std::string& chrom,
                                 const RunConfig& config) {
  StepResult acc{leaf_records(sets.front(), chrom)};
  for (std::size_t i = 1; i < sets.size(); ++i) {
    StepResult next = combine(acc.records, leaf_records(sets[i], chrom), config);
    next.absorb_costs(acc);
    acc = std::move(next);
  }
  return acc;
}

}  // namespace detail

/// Chromosomes present in every set, sorted.
inline std::vector<std::string> shared_chromosomes(const std::vector<IntervalSet>& sets) {
  std::vector<std::string> out;
  if (sets.empty()) return out;
  for (const auto& [chrom, list] : sets.front().per_chrom) {
    bool everywhere = std::all_of(sets.begin() + 1, sets.end(),
                                  [&](const IntervalSet& s) { return s.per_chrom.contains(chrom); });
    if (everywhere) out.push_back(chrom);
  }
  return out;
}

/// Jointly overlapping regions across all `sets`, sorted by record_less.
inline std::vector<OverlapRecord> joint_overlap(const std::vector<IntervalSet>& sets, const RunConfig& config,
                                                JoinMetrics* metrics = nullptr,
                                                PlanShape plan = PlanShape::Midpoint) {
  config.validate();
  if (sets.empty()) throw std::invalid_argument("joint_overlap: at least one interval set is required");

  const std::vector<std::string> chroms = shared_chromosomes(sets);
  std::vector<StepResult> per_chrom(chroms.size());

  tbb::task_arena arena(static_cast<int>(config.workers));
  arena.execute([&] {
    tbb::parallel_for(std::size_t{0}, chroms.size(), [&](std::size_t i) {
      per_chrom[i] = plan == PlanShape::Midpoint ? detail::join_range(sets, chroms[i], 0, sets.size(), config)
                                                 : detail::join_left_fold(sets, chroms[i], config);
    });
  });

  std::vector<OverlapRecord> out;
  std::size_t total = 0;
  for (const StepResult& r : per_chrom) total += r.records.size();
  out.reserve(total);
  for (std::size_t i = 0; i < chroms.size(); ++i) {
    StepResult& r = per_chrom[i];
    if (metrics) {
      metrics->construct += r.construct;
      metrics->query += r.query;
      ChromMetrics m = r.metrics;
      m.records = r.records.size();
      metrics->per_chrom[chroms[i]] = std::move(m);
    }
    std::move(r.records.begin(), r.records.end(), std::back_inserter(out));
  }
  if (metrics) {
    // Chromosomes missing from some inputs are still reported so naming mismatches show up.
    for (const IntervalSet& s : sets) {
      for (const auto& [chrom, list] : s.per_chrom) metrics->per_chrom[chrom].sources.push_back(s.source_id);
    }
  }
  std::sort(out.begin(), out.end(), record_less);
  return out;
}

}  // namespace joa
