#include "tokenlab/harness/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "tokenlab/error.hpp"
#include "tokenlab/tokens.hpp"

namespace tokenlab::harness {

namespace {

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  throw DataError("dataset line " + std::to_string(line) + ": " + what);
}

std::uint64_t parse_u64(std::string_view s, std::size_t line, const char* field) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    bad(line, std::string("invalid ") + field + " '" + std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s, std::size_t line, const std::string& field) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    bad(line, "invalid " + field + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_dataset(std::ostream& out, std::span<const analytics::PerformanceRecord> records) {
  std::set<std::string> extras;
  for (const auto& r : records) {
    for (const auto& [name, value] : r.extra_features) extras.insert(name);
  }
  out << kDatasetHeader;
  for (const auto& name : extras) out << ',' << name;
  out << '\n';
  for (const auto& r : records) {
    out << r.record_id << ',' << r.subject_id << ',' << r.token_label << ','
        << format_double(r.net_profit) << ',' << r.seed;
    for (const auto& name : extras) {
      auto it = r.extra_features.find(name);
      out << ',';
      if (it != r.extra_features.end()) out << format_double(it->second);
    }
    out << '\n';
  }
}

std::vector<analytics::PerformanceRecord> read_dataset(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) {
    bad(1, "missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  static constexpr std::string_view kFixed[] = {"record_id", "subject_id", "token_label",
                                                "net_profit", "seed"};
  if (header.size() < 5) bad(1, "header must start with " + std::string(kDatasetHeader));
  for (std::size_t i = 0; i < 5; ++i) {
    if (header[i] != kFixed[i]) bad(1, "header must start with " + std::string(kDatasetHeader));
  }
  std::vector<std::string> extras;
  for (std::size_t i = 5; i < header.size(); ++i) {
    if (header[i].empty()) bad(1, "empty extra feature name");
    extras.emplace_back(header[i]);
  }

  std::vector<analytics::PerformanceRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      bad(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    analytics::PerformanceRecord r;
    r.record_id = parse_u64(fields[0], line_no, "record_id");
    r.subject_id = parse_u64(fields[1], line_no, "subject_id");
    r.token_label = std::string(fields[2]);
    if (!tokens::token_index(r.token_label)) {
      bad(line_no, "invalid token_label '" + r.token_label + "'");
    }
    r.net_profit = parse_double(fields[3], line_no, "net_profit");
    r.seed = parse_u64(fields[4], line_no, "seed");
    for (std::size_t i = 0; i < extras.size(); ++i) {
      if (!fields[5 + i].empty()) {
        r.extra_features[extras[i]] = parse_double(fields[5 + i], line_no, extras[i]);
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

void export_dataset(std::span<const analytics::PerformanceRecord> records,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write dataset " + path.string());
  }
  write_dataset(out, records);
  out.flush();
  if (!out) {
    throw std::runtime_error("error writing dataset " + path.string());
  }
}

std::vector<analytics::PerformanceRecord> import_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read dataset " + path.string());
  }
  try {
    return read_dataset(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace tokenlab::harness
