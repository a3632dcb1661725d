// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "joa/bed_io.hpp"
#include "joa/datagen.hpp"
#include "joa/forest.hpp"
#include "joa/forest_search.hpp"
#include "joa/index_stats.hpp"
#include "joa/nway.hpp"
#include "joa/oracle.hpp"
#include "joa/segment_tree.hpp"
#include "test_support.hpp"

namespace {

using namespace joa;
using testing::random_intervals;
using testing::slurp;
using testing::TempDir;
using Tree = SegmentTree<GenomicInterval>;
using Forest = IndexedSegmentForest<GenomicInterval>;
using Pair = std::pair<std::size_t, std::size_t>;

struct Result {
  bool pass;
  std::string detail;
};

struct Instance {
  std::vector<GenomicInterval> stored;
  std::vector<GenomicInterval> queries;
};

// Seeds 0..19; at most 2,000 stored intervals and 500 queries each.
std::vector<Instance> query_instances() {
  std::vector<Instance> out;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 1'000 + 50 * seed;
    const Position universe = 2'000'000 + 400'000 * seed;
    const Position max_len = seed % 4 == 0 ? 200'000 : 5'000;
    Instance inst;
    inst.stored = random_intervals(rng, n, universe, max_len, "chr1", 0);
    inst.queries = random_intervals(rng, 500, universe + universe / 10, 3 * max_len, "chr1", 1);
    out.push_back(std::move(inst));
  }
  return out;
}

int run_cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "joa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

Result oracle_equivalence_st(const std::vector<Instance>& instances) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t pairs = 0;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const Instance& inst = instances[k];
    const Tree tree(inst.stored);
    std::vector<Pair> got;
    for (std::size_t j = 0; j < inst.queries.size(); ++j) {
      for (ItemId i : tree.query_overlap(Span{inst.queries[j].low, inst.queries[j].high})) got.emplace_back(i, j);
    }
    auto want = oracle::brute_pair_overlap(inst.stored, inst.queries);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) return {false, "instance seed " + std::to_string(k) + " differs from the pairwise scan"};
    pairs += got.size();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 10.0) return {false, "took " + std::to_string(secs) + " s (limit 10 s)"};
  return {true, std::to_string(pairs) + " overlapping pairs across 20 instances, " + std::to_string(secs) + " s"};
}

struct ForestRun {
  bool equal = true;
  std::size_t max_probes = 0;
  std::size_t probe_violations = 0;
  std::size_t queries = 0;
  std::string first_mismatch;
};

ForestRun forest_equivalence(const std::vector<Instance>& instances) {
  ForestRun run;
  const RunConfig defaults;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const Instance& inst = instances[k];
    const Tree tree(inst.stored);
    const Forest forest(tree, defaults.preset_value, defaults.percentage);
    for (const auto& q : inst.queries) {
      const Span s{q.low, q.high};
      SearchStats stats;
      const auto got = main_search(forest, s, &stats);
      ++run.queries;
      run.max_probes = std::max(run.max_probes, stats.index_probes);
      if (stats.index_probes > 4) ++run.probe_violations;
      if (run.equal && got != tree.query_overlap(s)) {
        run.equal = false;
        run.first_mismatch = "seed " + std::to_string(k) + " query [" + std::to_string(s.low) + "," + std::to_string(s.high) + "]";
      }
    }
  }
  return run;
}

Result height_bound() {
  double bst_sum = 0, tree_sum = 0;
  std::uint32_t violations = 0;
  std::size_t strict_fail = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(1'000 + seed);
    const Tree tree(random_intervals(rng, 10'000 + 500 * seed, 50'000'000, 2'000));
    const Forest forest(tree, 1'000'000, 0.5);
    for (const auto& [index, root] : forest.index_map()) {
      if (forest.subtree_height(root) > tree.height()) ++violations;
    }
    const ForestStats s = forest.stats();
    bst_sum += s.bst_height_mean;
    tree_sum += tree.height();
    if (!(s.bst_height_mean < tree.height())) ++strict_fail;
  }
  const double bst_mean = bst_sum / 20, tree_mean = tree_sum / 20;
  std::ostringstream d;
  d << "mean BST height " << bst_mean << " vs mean tree height " << tree_mean << ", " << violations
    << " per-index violations";
  return {violations == 0 && strict_fail == 0 && bst_mean < tree_mean, d.str()};
}

std::vector<IntervalSet> nway_instance(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<IntervalSet> sets;
  for (std::uint32_t s = 0; s < n; ++s) {
    IntervalSet set;
    set.source_id = s;
    auto a = random_intervals(rng, 200, 400'000, 8'000, "chr1", s);
    auto b = random_intervals(rng, 100, 150'000, 4'000, "chr2", s);
    for (std::size_t i = 0; i < b.size(); ++i) b[i].record_id = a.size() + i;
    set.per_chrom["chr1"] = std::move(a);
    set.per_chrom["chr2"] = std::move(b);
    sets.push_back(std::move(set));
  }
  return sets;
}

Result nway_correctness() {
  std::ostringstream d;
  for (std::size_t n : {1, 2, 3, 5, 8}) {
    const auto sets = nway_instance(n, 500 + n);
    std::vector<std::vector<GenomicInterval>> flat;
    for (const auto& s : sets) {
      std::vector<GenomicInterval> all;
      for (const auto& [c, l] : s.per_chrom) all.insert(all.end(), l.begin(), l.end());
      flat.push_back(std::move(all));
    }
    const auto expected = oracle::brute_nway(flat);
    for (IndexMethod m : {IndexMethod::SegmentTree, IndexMethod::Forest}) {
      RunConfig config;
      config.method = m;
      config.workers = 4;
      if (joint_overlap(sets, config) != expected) return {false, "n=" + std::to_string(n) + " differs from oracle"};
      if (joint_overlap(sets, config, nullptr, PlanShape::LeftFold) != expected) {
        return {false, "n=" + std::to_string(n) + " left fold differs"};
      }
    }
    d << "n=" << n << ":" << expected.size() << " ";
  }
  return {true, "records " + d.str()};
}

Result thread_determinism() {
  TempDir dir;
  std::size_t files_compared = 0;
  for (std::size_t n : {1, 2, 3, 5, 8}) {
    const auto sets = nway_instance(n, 500 + n);
    std::vector<std::string> inputs;
    for (const auto& s : sets) {
      std::vector<GenomicInterval> all;
      for (const auto& [c, l] : s.per_chrom) all.insert(all.end(), l.begin(), l.end());
      const auto path = dir / ("n" + std::to_string(n) + "_" + std::to_string(s.source_id) + ".bed");
      std::ofstream out(path);
      write_bed(all, out);
      inputs.push_back(path.string());
    }
    std::string reference;
    for (const char* threads : {"1", "2", "8"}) {
      const auto out = dir / ("out_" + std::to_string(n) + "_" + threads + ".tsv");
      std::vector<std::string> args{"intersect", "--threads", threads, "--output", out.string()};
      args.insert(args.end(), inputs.begin(), inputs.end());
      if (run_cli(args) != 0) return {false, "intersect failed for n=" + std::to_string(n)};
      const std::string text = slurp(out);
      if (reference.empty()) reference = text;
      if (text != reference) return {false, "n=" + std::to_string(n) + " threads=" + threads + " differs"};
      ++files_compared;
    }
  }
  return {true, std::to_string(files_compared) + " outputs byte-identical across --threads 1/2/8"};
}

Result parameter_monotonicity() {
  TempDir dir;
  const auto gen = generate_uniform(1, 100'000, 500, default_chrom_sizes(), 77, dir.path());
  const IntervalSet set = read_bed(gen.files.front(), 0);
  const std::vector<Position> presets{10'000, 100'000, 1'000'000};
  const std::vector<double> pcts{0.5, 2, 5, 10};

  std::vector<std::size_t> indexes;
  for (Position p : presets) {
    std::size_t total = 0;
    for (const auto& row : index_sweep(set, std::vector<Position>{p}, std::vector<double>{0.5})) total += row.forest.index_count;
    indexes.push_back(total);
  }
  std::vector<std::size_t> moved;
  for (double pct : pcts) {
    std::size_t total = 0;
    for (const auto& row : index_sweep(set, std::vector<Position>{1'000'000}, std::vector<double>{pct})) total += row.forest.moved_count;
    moved.push_back(total);
  }
  const bool idx_ok = std::is_sorted(indexes.rbegin(), indexes.rend());
  const bool moved_ok = std::is_sorted(moved.begin(), moved.end());
  std::ostringstream d;
  d << "indexes";
  for (auto v : indexes) d << ' ' << v;
  d << "; moved";
  for (auto v : moved) d << ' ' << v;
  return {idx_ok && moved_ok, d.str()};
}

Result relocation_completeness(const std::vector<Instance>& instances) {
  std::size_t checked = 0;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const Tree tree(instances[k].stored);
    const Forest forest(tree, 1'000'000, 0.5);
    std::mt19937_64 rng(9'000 + k);
    std::uniform_int_distribution<Position> point(0, tree.node(tree.root()).span.high + 1'000);
    for (int i = 0; i < 1'000; ++i) {
      const Position q = point(rng);
      auto want = tree.stab(q);
      std::sort(want.begin(), want.end());
      if (main_search(forest, Span{q, q}) != want) {
        return {false, "instance " + std::to_string(k) + " point " + std::to_string(q)};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " point queries agree"};
}

Result bed_round_trip() {
  TempDir dir;
  const auto gen = generate_uniform(4, 25'000, 500, default_chrom_sizes(), 5, dir.path());
  for (std::uint32_t i = 0; i < gen.files.size(); ++i) {
    const IntervalSet set = read_bed(gen.files[i], i);
    if (set.skipped != 0 || set.interval_count() != 25'000) {
      return {false, gen.files[i].string() + " re-read with " + std::to_string(set.skipped) + " skips"};
    }
  }
  const auto bad = dir.write("bad.bed", "chr1\t0\t10\nchr1\t5\t9\nchr1\t5\tx9\n");
  std::string err;
  const int code = run_cli({"intersect", gen.files[0].string(), bad.string()}, &err);
  if (code != 2) return {false, "malformed input exited with " + std::to_string(code)};
  if (err.find("bad.bed:3") == std::string::npos) return {false, "message lacks line number: " + err};
  return {true, "100000 generated intervals re-read, 0 skips; malformed line -> exit 2 (" + err.substr(0, err.size() - 1) + ")"};
}

}  // namespace

int main() {
  const auto instances = query_instances();
  ForestRun forest_run;
  bool forest_ran = false;
  auto forest_once = [&]() -> const ForestRun& {
    if (!forest_ran) {
      forest_run = forest_equivalence(instances);
      forest_ran = true;
    }
    return forest_run;
  };

  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"1 oracle equivalence (segment tree)", [&] { return oracle_equivalence_st(instances); }},
      {"2 oracle equivalence (forest)",
       [&] {
         const auto& r = forest_once();
         return Result{r.equal, r.equal ? std::to_string(r.queries) + " queries identical to segment tree"
                                        : "mismatch at " + r.first_mismatch};
       }},
      {"3 index probe bound",
       [&] {
         const auto& r = forest_once();
         return Result{r.probe_violations == 0, "max probes " + std::to_string(r.max_probes) + ", violations " +
                                                    std::to_string(r.probe_violations)};
       }},
      {"4 collision BST height bound", height_bound},
      {"5 n-way correctness", nway_correctness},
      {"6 determinism across thread counts", thread_determinism},
      {"7 parameter monotonicity", parameter_monotonicity},
      {"8 relocation completeness", [&] { return relocation_completeness(instances); }},
      {"9 BED round trip and malformed input", bed_round_trip},
  };

  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Result r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << name << ": " << r.detail << '\n';
    if (!r.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
