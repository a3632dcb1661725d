#pragma once

// Semi-synthetic interval sets: fixed-length intervals placed uniformly at
// random over a genome described by chromosome sizes.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "joa/bed_io.hpp"
#include "joa/interval.hpp"

namespace joa {

/// Small built-in genome used when no chrom-sizes file is given.
inline ChromSizes default_chrom_sizes() {
  return ChromSizes{{"chr1", 12'000'000}, {"chr2", 9'000'000}, {"chr3", 6'000'000}, {"chrX", 3'000'000}};
}

struct GenerateResult {
  std::vector<std::filesystem::path> files;
  /// Chromosomes shorter than the interval length, left out of sampling.
  std::vector<std::string> excluded;
};

/// Chromosome picked proportional to size, start uniform in [0, size - len].
class UniformIntervalSampler {
 public:
  UniformIntervalSampler(const ChromSizes& sizes, Position interval_len) : len_(interval_len) {
    if (interval_len == 0) throw std::invalid_argument("interval length must be positive");
    std::vector<double> weights;
    for (const auto& [name, size] : sizes) {
      if (size < interval_len) {
        excluded_.push_back(name);
        continue;
      }
      names_.push_back(name);
      sizes_.push_back(size);
      weights.push_back(static_cast<double>(size));
    }
    if (names_.empty()) throw std::invalid_argument("no chromosome is long enough for the interval length");
    pick_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }

  template <class Rng>
  GenomicInterval operator()(Rng& rng) {
    const std::size_t c = pick_(rng);
    std::uniform_int_distribution<Position> start(0, sizes_[c] - len_);
    const Position low = start(rng);
    return GenomicInterval{names_[c], low, low + len_ - 1};
  }

  const std::vector<std::string>& excluded() const { return excluded_; }

 private:
  Position len_;
  std::vector<std::string> names_;
  std::vector<Position> sizes_;
  std::vector<std::string> excluded_;
  std::discrete_distribution<std::size_t> pick_;
};

/// In-memory variant of one generated file.
inline std::vector<GenomicInterval> generate_intervals(std::size_t n_intervals, Position interval_len,
                                                       const ChromSizes& sizes, std::uint64_t seed,
                                                       std::uint32_t file_index = 0) {
  UniformIntervalSampler sampler(sizes, interval_len);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), file_index};
  std::mt19937_64 rng(seq);
  std::vector<GenomicInterval> out;
  out.reserve(n_intervals);
  for (std::size_t i = 0; i < n_intervals; ++i) {
    GenomicInterval iv = sampler(rng);
    iv.source_id = file_index;
    iv.record_id = i;
    out.push_back(std::move(iv));
  }
  return out;
}

/// Writes `n_files` BED files named set_<k>.bed into `out_dir`.
inline GenerateResult generate_uniform(std::size_t n_files, std::size_t n_intervals, Position interval_len,
                                       const ChromSizes& sizes, std::uint64_t seed,
                                       const std::filesystem::path& out_dir) {
  if (n_files == 0 || n_intervals == 0) throw std::invalid_argument("file and interval counts must be positive");
  if (sizes.empty()) throw std::invalid_argument("chromosome size table is empty");
  GenerateResult result;
  result.excluded = UniformIntervalSampler(sizes, interval_len).excluded();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const std::size_t width = std::to_string(n_files - 1).size();
  for (std::size_t f = 0; f < n_files; ++f) {
    std::string index = std::to_string(f);
    index.insert(0, width - index.size(), '0');
    const std::filesystem::path path = out_dir / ("set_" + index + ".bed");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_bed(generate_intervals(n_intervals, interval_len, sizes, seed, static_cast<std::uint32_t>(f)), out);
    out.flush();
    if (!out) throw IoError("write error: " + path.string());
    result.files.push_back(path);
  }
  return result;
}

}  // namespace joa
