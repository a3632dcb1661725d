#pragma once

// Brute-force references. Linear scans over the core overlap predicate only;
// nothing here touches the tree or forest code.

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "joa/interval.hpp"

namespace joa::oracle {

/// Indices of intervals containing q.
template <ClosedRange T>
std::vector<std::size_t> brute_stab(std::span<const T> intervals, Position q) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].low <= q && q <= intervals[i].high) out.push_back(i);
  }
  return out;
}

/// Indices of intervals overlapping the closed span [low, high].
template <ClosedRange T>
std::vector<std::size_t> brute_overlap(std::span<const T> intervals, Span q) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (spans_overlap(intervals[i], q)) out.push_back(i);
  }
  return out;
}

/// All index pairs (i, j) with overlaps(a[i], b[j]), row-major.
inline std::vector<std::pair<std::size_t, std::size_t>> brute_pair_overlap(std::span<const GenomicInterval> a,
                                                                           std::span<const GenomicInterval> b) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (overlaps(a[i], b[j])) out.emplace_back(i, j);
    }
  }
  return out;
}

/// Left fold of pairwise overlap-and-intersect over all sets. Sorted by record_less.
inline std::vector<OverlapRecord> brute_nway(const std::vector<std::vector<GenomicInterval>>& sets) {
  std::vector<OverlapRecord> acc;
  if (sets.empty()) return acc;
  for (const GenomicInterval& iv : sets.front()) acc.push_back(to_record(iv));
  for (std::size_t s = 1; s < sets.size(); ++s) {
    std::vector<OverlapRecord> next;
    for (const OverlapRecord& r : acc) {
      const GenomicInterval region{r.chrom, r.low, r.high};
      for (const GenomicInterval& iv : sets[s]) {
        if (!overlaps(region, iv)) continue;
        const GenomicInterval cut = intersect_region(region, iv);
        std::vector<Contributor> contributors = r.contributors;
        contributors.push_back({iv.source_id, iv.record_id});
        std::sort(contributors.begin(), contributors.end());
        next.push_back(OverlapRecord{cut.chrom, cut.low, cut.high, std::move(contributors)});
      }
    }
    acc = std::move(next);
  }
  std::sort(acc.begin(), acc.end(), record_less);
  return acc;
}

}  // namespace joa::oracle
