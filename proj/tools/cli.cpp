#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "joa/bed_io.hpp"
#include "joa/datagen.hpp"
#include "joa/index_stats.hpp"
#include "joa/nway.hpp"

namespace joa::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

double seconds(std::chrono::nanoseconds d) { return std::chrono::duration<double>(d).count(); }

struct IntersectArgs {
  std::string method = "istf";
  Position preset_value = 1'000'000;
  double percentage = 0.5;
  unsigned threads = 1;
  std::string output;
  std::string metrics;
  std::vector<std::string> inputs;
};

struct StatsArgs {
  std::string input;
  std::vector<Position> presets{1'000'000};
  std::vector<double> percentages{0.5};
  std::string output;
};

struct GenerateArgs {
  std::size_t files = 2;
  std::size_t intervals = 100'000;
  Position length = 500;
  std::uint64_t seed = 0;
  std::string chrom_sizes;
  std::string out_dir = ".";
};

int intersect(const IntersectArgs& args, std::ostream& out) {
  RunConfig config;
  config.method = args.method == "st" ? IndexMethod::SegmentTree : IndexMethod::Forest;
  config.preset_value = args.preset_value;
  config.percentage = args.percentage;
  config.workers = args.threads;

  const auto read_start = Clock::now();
  std::vector<IntervalSet> sets;
  sets.reserve(args.inputs.size());
  for (std::size_t i = 0; i < args.inputs.size(); ++i) {
    sets.push_back(read_bed(args.inputs[i], static_cast<std::uint32_t>(i)));
  }
  const auto read_time = Clock::now() - read_start;

  JoinMetrics join_metrics;
  const auto join_start = Clock::now();
  std::vector<OverlapRecord> records = joint_overlap(sets, config, &join_metrics);
  const auto join_time = Clock::now() - join_start;
  const std::size_t count = records.size();

  const auto write_start = Clock::now();
  if (args.output.empty()) {
    write_output(std::move(records), out);
  } else {
    write_output(std::move(records), fs::path(args.output));
  }
  const auto write_time = Clock::now() - write_start;

  if (!args.metrics.empty()) {
    std::ofstream m(args.metrics, std::ios::binary);
    if (!m) throw IoError("cannot open " + args.metrics + " for writing");
    auto line = [&](const json& j) { m << j.dump() << '\n'; };
    json run{{"event", "run"},    {"method", args.method},         {"preset_value", config.preset_value},
             {"percentage", config.percentage}, {"threads", config.workers}, {"inputs", args.inputs}};
    line(run);
    line({{"event", "phase"}, {"phase", "read"}, {"seconds", seconds(read_time)}});
    line({{"event", "phase"}, {"phase", "construct"}, {"seconds", seconds(join_metrics.construct)}});
    line({{"event", "phase"}, {"phase", "query"}, {"seconds", seconds(join_metrics.query)}});
    line({{"event", "phase"}, {"phase", "write"}, {"seconds", seconds(write_time)}});
    for (const auto& [chrom, c] : join_metrics.per_chrom) {
      line({{"event", "chromosome"},
            {"chrom", chrom},
            {"sources", c.sources},
            {"records", c.records},
            {"indexes_built", c.indexes_built},
            {"stored_intervals", c.stored_intervals},
            {"max_tree_height", c.max_tree_height},
            {"max_cutoff_depth", c.max_cutoff_depth},
            {"hash_indexes", c.hash_indexes},
            {"max_bst_height", c.max_bst_height},
            {"moved_count", c.moved_count}});
    }
    std::size_t skipped = 0;
    for (const IntervalSet& s : sets) skipped += s.skipped;
    line({{"event", "summary"},
          {"records", count},
          {"skipped_input_lines", skipped},
          {"join_wall_seconds", seconds(join_time)}});
    if (!m) throw IoError("write error: " + args.metrics);
  }
  return kOk;
}

int stats(const StatsArgs& args, std::ostream& out) {
  const IntervalSet set = read_bed(args.input, 0);
  const auto rows = index_sweep(set, args.presets, args.percentages);
  if (args.output.empty()) {
    write_index_stats(rows, out);
    return kOk;
  }
  std::ofstream file(args.output, std::ios::binary);
  if (!file) throw IoError("cannot open " + args.output + " for writing");
  write_index_stats(rows, file);
  if (!file) throw IoError("write error: " + args.output);
  return kOk;
}

int generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  const ChromSizes sizes = args.chrom_sizes.empty() ? default_chrom_sizes() : read_chrom_sizes(args.chrom_sizes);
  const GenerateResult result = generate_uniform(args.files, args.intervals, args.length, sizes, args.seed, args.out_dir);
  for (const std::string& chrom : result.excluded) {
    err << "warning: " << chrom << " is shorter than " << args.length << " bp and was excluded\n";
  }
  for (const fs::path& path : result.files) out << path.string() << '\t' << args.intervals << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint overlap analysis of genomic interval sets", "joa"};
  app.require_subcommand(1);

  IntersectArgs ia;
  auto* cmd_intersect = app.add_subcommand("intersect", "Find jointly overlapping intervals across BED files");
  cmd_intersect->add_option("--method", ia.method, "Index structure")
      ->check(CLI::IsMember({"st", "istf"}))
      ->capture_default_str();
  cmd_intersect->add_option("--preset-value", ia.preset_value, "Hash divisor for forest indexes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_intersect->add_option("--percentage", ia.percentage, "Share of stored intervals allowed above the cut-off")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_intersect->add_option("--threads", ia.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  cmd_intersect->add_option("--output", ia.output, "Output TSV (default: stdout)");
  cmd_intersect->add_option("--metrics", ia.metrics, "JSON-lines run metrics");
  cmd_intersect->add_option("inputs", ia.inputs, "BED files")->required();

  StatsArgs sa;
  auto* cmd_stats = app.add_subcommand("stats", "Tree and forest structure for one BED file");
  cmd_stats->add_option("input", sa.input, "BED file")->required();
  cmd_stats->add_option("--preset-value", sa.presets, "One or more preset values")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_stats->add_option("--percentage", sa.percentages, "One or more percentages")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_stats->add_option("--output", sa.output, "Output TSV (default: stdout)");

  GenerateArgs ga;
  auto* cmd_generate = app.add_subcommand("generate", "Write uniformly sampled fixed-length BED files");
  cmd_generate->add_option("--files", ga.files, "Number of files")->check(CLI::PositiveNumber)->capture_default_str();
  cmd_generate->add_option("--intervals", ga.intervals, "Intervals per file")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_generate->add_option("--length", ga.length, "Interval length in bp")->check(CLI::PositiveNumber)->capture_default_str();
  cmd_generate->add_option("--seed", ga.seed, "Random seed")->capture_default_str();
  cmd_generate->add_option("--chrom-sizes", ga.chrom_sizes, "TSV of name<TAB>length (default: built-in table)");
  cmd_generate->add_option("--out-dir", ga.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*cmd_intersect) return intersect(ia, out);
    if (*cmd_stats) return stats(sa, out);
    return generate(ga, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace joa::cli
