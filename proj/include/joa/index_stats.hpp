#pragma once

// Structural measurements of segment trees and the forests cut from them,
// swept over preset values and percentages.

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "joa/bed_io.hpp"
#include "joa/forest.hpp"
#include "joa/segment_tree.hpp"

namespace joa {

struct IndexStatsRow {
  std::string chrom;
  Position preset_value = 0;
  double percentage = 0;
  std::size_t intervals = 0;
  ForestStats forest;
};

inline std::vector<IndexStatsRow> index_sweep(const IntervalSet& set, std::span<const Position> presets,
                                              std::span<const double> percentages) {
  std::vector<IndexStatsRow> rows;
  for (const auto& [chrom, intervals] : set.per_chrom) {
    SegmentTree<GenomicInterval> tree(intervals);
    for (Position preset : presets) {
      for (double pct : percentages) {
        IndexedSegmentForest<GenomicInterval> forest(tree, preset, pct);
        rows.push_back(IndexStatsRow{chrom, preset, pct, intervals.size(), forest.stats()});
      }
    }
  }
  return rows;
}

inline void write_index_stats(const std::vector<IndexStatsRow>& rows, std::ostream& out) {
  out << "chrom\tpreset_value\tpercentage\tintervals\ttree_height\tcutoff_depth\tcutoff_from_leaves"
         "\tmoved_count\tkept_nodes\thash_indexes\tnodes_per_index_mean\tnodes_per_index_sd"
         "\tbst_height_mean\tbst_height_max\n";
  for (const IndexStatsRow& r : rows) {
    const ForestStats& f = r.forest;
    out << r.chrom << '\t' << r.preset_value << '\t' << r.percentage << '\t' << r.intervals << '\t'
        << f.original_height << '\t' << f.cutoff_depth << '\t' << f.cutoff_from_leaves << '\t' << f.moved_count
        << '\t' << f.kept_nodes << '\t' << f.index_count << '\t' << f.nodes_per_index_mean << '\t'
        << f.nodes_per_index_sd << '\t' << f.bst_height_mean << '\t' << f.bst_height_max << '\n';
  }
}

}  // namespace joa
