#pragma once

// BED input and TSV output.
//
// BED is 0-based half-open; everything inside the library is closed. A record
// `chr1 100 200` becomes chr1:[100,199] on the way in and goes back out as
// `chr1\t100\t200`.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "joa/interval.hpp"

namespace joa {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const { return source_; }
  /// 1-based line number.
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

struct IntervalSet {
  std::uint32_t source_id = 0;
  std::string name;
  std::map<std::string, std::vector<GenomicInterval>> per_chrom;
  std::size_t skipped = 0;

  std::size_t interval_count() const {
    std::size_t n = 0;
    for (const auto& [chrom, list] : per_chrom) n += list.size();
    return n;
  }
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line, std::size_t max_fields) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (fields.size() < max_fields) {
    pos = line.find_first_not_of(" \t", pos);
    if (pos == std::string_view::npos) break;
    const std::size_t end = line.find_first_of(" \t", pos);
    fields.push_back(line.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    if (end == std::string_view::npos) break;
    pos = end;
  }
  return fields;
}

inline bool parse_position(std::string_view text, Position& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

inline bool is_header_line(std::string_view line) {
  const std::size_t start = line.find_first_not_of(" \t");
  if (start == std::string_view::npos) return true;
  line.remove_prefix(start);
  return line.starts_with('#') || line.starts_with("track") || line.starts_with("browser");
}

inline void append_number(std::string& out, std::uint64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace detail

/// Parses BED text. `name` is used in error messages.
inline IntervalSet parse_bed(std::istream& in, std::uint32_t source_id, const std::string& name) {
  IntervalSet set;
  set.source_id = source_id;
  set.name = name;
  std::string line;
  std::size_t line_index = 0;
  for (; std::getline(in, line); ++line_index) {
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (detail::is_header_line(view)) continue;

    const auto fields = detail::split_fields(view, 3);
    if (fields.size() < 3) {
      throw ParseError(name, line_index + 1, "expected at least 3 columns (chrom, start, end)");
    }
    Position start = 0;
    Position end = 0;
    if (!detail::parse_position(fields[1], start)) {
      throw ParseError(name, line_index + 1, "start is not a non-negative integer: '" + std::string(fields[1]) + "'");
    }
    if (!detail::parse_position(fields[2], end)) {
      throw ParseError(name, line_index + 1, "end is not a non-negative integer: '" + std::string(fields[2]) + "'");
    }
    if (end <= start) {
      ++set.skipped;
      continue;
    }
    std::string chrom(fields[0]);
    auto& bucket = set.per_chrom[chrom];
    bucket.push_back(GenomicInterval{std::move(chrom), start, end - 1, source_id, line_index});
  }
  if (in.bad()) throw IoError("read error: " + name);
  return set;
}

inline IntervalSet read_bed(const std::filesystem::path& path, std::uint32_t source_id) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_bed(in, source_id, path.string());
}

/// Writes records sorted by (chrom, start, end, contributors), then `# count=N`.
inline void write_output(std::vector<OverlapRecord> records, std::ostream& out) {
  std::sort(records.begin(), records.end(), record_less);
  std::string buffer;
  buffer.reserve(1 << 16);
  auto flush = [&] {
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    buffer.clear();
  };
  for (const OverlapRecord& r : records) {
    buffer += r.chrom;
    buffer += '\t';
    detail::append_number(buffer, r.low);
    buffer += '\t';
    detail::append_number(buffer, r.high + 1);
    buffer += '\n';
    if (buffer.size() > (1 << 15)) flush();
  }
  buffer += "# count=";
  detail::append_number(buffer, records.size());
  buffer += '\n';
  flush();
  if (!out) throw IoError("write error");
}

inline void write_output(std::vector<OverlapRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_output(std::move(records), out);
  out.flush();
  if (!out) throw IoError("write error: " + path.string());
}

/// Writes closed intervals as BED lines, in the given order.
inline void write_bed(const std::vector<GenomicInterval>& intervals, std::ostream& out) {
  std::string buffer;
  for (const GenomicInterval& iv : intervals) {
    buffer += iv.chrom;
    buffer += '\t';
    detail::append_number(buffer, iv.low);
    buffer += '\t';
    detail::append_number(buffer, iv.high + 1);
    buffer += '\n';
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw IoError("write error");
}

using ChromSizes = std::map<std::string, Position>;

/// `name <TAB> length` per line; blank and `#` lines ignored.
inline ChromSizes parse_chrom_sizes(std::istream& in, const std::string& name) {
  ChromSizes sizes;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    const std::size_t start = view.find_first_not_of(" \t");
    if (start == std::string_view::npos || view[start] == '#') continue;
    const auto fields = detail::split_fields(view, 2);
    Position length = 0;
    if (fields.size() < 2 || !detail::parse_position(fields[1], length) || length == 0) {
      throw ParseError(name, line_no, "expected 'name<TAB>positive length'");
    }
    sizes[std::string(fields[0])] = length;
  }
  return sizes;
}

inline ChromSizes read_chrom_sizes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_chrom_sizes(in, path.string());
}

}  // namespace joa
