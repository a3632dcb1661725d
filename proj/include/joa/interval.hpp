#pragma once

// Interval model shared by every index and the n-way engine.
// All coordinates are closed on both ends: [low, high] contains both endpoints.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace joa {

using Position = std::uint64_t;

/// Closed span of base positions with no chromosome attached.
struct Span {
  Position low = 0;
  Position high = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

/// Anything carrying closed `low`/`high` members can be indexed.
template <class T>
concept ClosedRange = requires(const T& t) {
  { t.low } -> std::convertible_to<Position>;
  { t.high } -> std::convertible_to<Position>;
};

struct GenomicInterval {
  std::string chrom;
  Position low = 0;
  Position high = 0;
  std::uint32_t source_id = 0;
  std::uint64_t record_id = 0;

  friend bool operator==(const GenomicInterval&, const GenomicInterval&) = default;
};

/// Identifies one input line: which set it came from and its line ordinal.
struct Contributor {
  std::uint32_t source_id = 0;
  std::uint64_t record_id = 0;

  friend auto operator<=>(const Contributor&, const Contributor&) = default;
};

/// One jointly overlapping region; contributors are kept sorted by source_id.
struct OverlapRecord {
  std::string chrom;
  Position low = 0;
  Position high = 0;
  std::vector<Contributor> contributors;

  friend bool operator==(const OverlapRecord&, const OverlapRecord&) = default;
};

/// Total order used for deterministic output.
inline bool record_less(const OverlapRecord& a, const OverlapRecord& b) {
  return std::tie(a.chrom, a.low, a.high, a.contributors) <
         std::tie(b.chrom, b.low, b.high, b.contributors);
}

enum class IndexMethod { SegmentTree, Forest };

struct RunConfig {
  IndexMethod method = IndexMethod::Forest;
  Position preset_value = 1'000'000;
  double percentage = 0.5;
  unsigned workers = 1;

  void validate() const {
    if (preset_value < 1) throw std::invalid_argument("preset value must be >= 1");
    if (!(percentage > 0.0)) throw std::invalid_argument("percentage must be > 0");
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  }
};

template <ClosedRange A, ClosedRange B>
constexpr bool spans_overlap(const A& a, const B& b) {
  return a.low <= b.high && b.low <= a.high;
}

/// `inner` lies entirely within `outer`.
template <ClosedRange A, ClosedRange B>
constexpr bool contains(const A& outer, const B& inner) {
  return outer.low <= inner.low && inner.high <= outer.high;
}

inline bool overlaps(const GenomicInterval& a, const GenomicInterval& b) {
  return a.chrom == b.chrom && spans_overlap(a, b);
}

inline GenomicInterval intersect_region(const GenomicInterval& a, const GenomicInterval& b) {
  if (!overlaps(a, b)) {
    throw std::invalid_argument("intersect_region: intervals " + a.chrom + ":[" +
                                std::to_string(a.low) + "," + std::to_string(a.high) + "] and " +
                                b.chrom + ":[" + std::to_string(b.low) + "," +
                                std::to_string(b.high) + "] do not overlap");
  }
  GenomicInterval out = a;
  out.low = std::max(a.low, b.low);
  out.high = std::min(a.high, b.high);
  return out;
}

/// Merge two contributor lists that are each sorted by source_id.
inline std::vector<Contributor> merge_contributors(const std::vector<Contributor>& a,
                                                   const std::vector<Contributor>& b) {
  std::vector<Contributor> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline OverlapRecord to_record(const GenomicInterval& iv) {
  return OverlapRecord{iv.chrom, iv.low, iv.high, {{iv.source_id, iv.record_id}}};
}

/// Region intersection of two records on the same chromosome; contributors are unioned.
inline OverlapRecord combine_records(const OverlapRecord& a, const OverlapRecord& b) {
  if (a.chrom != b.chrom || !spans_overlap(a, b)) {
    throw std::invalid_argument("combine_records: records do not overlap");
  }
  return OverlapRecord{a.chrom, std::max(a.low, b.low), std::min(a.high, b.high),
                       merge_contributors(a.contributors, b.contributors)};
}

}  // namespace joa
