#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tokenlab/analytics/record.hpp"

namespace tokenlab::harness {

// Dataset CSV: record_id,subject_id,token_label,net_profit,seed followed by
// one column per extra feature (union of names across records, sorted).
// net_profit and extra features use the shortest round-trip decimal form.

void write_dataset(std::ostream& out, std::span<const analytics::PerformanceRecord> records);
[[nodiscard]] std::vector<analytics::PerformanceRecord> read_dataset(std::istream& in);

/// Throws std::runtime_error naming the path on I/O failure.
void export_dataset(std::span<const analytics::PerformanceRecord> records,
                    const std::filesystem::path& path);

/// Throws DataError with "line N" on malformed rows, std::runtime_error on I/O failure.
[[nodiscard]] std::vector<analytics::PerformanceRecord> import_dataset(
    const std::filesystem::path& path);

/// Header line written by write_dataset when there are no extra features.
inline constexpr const char* kDatasetHeader = "record_id,subject_id,token_label,net_profit,seed";

}  // namespace tokenlab::harness
