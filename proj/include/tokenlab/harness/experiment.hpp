#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tokenlab/analytics/crosstable.hpp"
#include "tokenlab/analytics/record.hpp"
#include "tokenlab/analytics/split.hpp"
#include "tokenlab/analytics/stats.hpp"
#include "tokenlab/harness/config.hpp"
#include "tokenlab/tokens.hpp"

namespace tokenlab::harness {

[[nodiscard]] std::string_view library_version() noexcept;

/// Raised when the token set is not sufficiently distinct and the run was not forced.
class DistinctnessError : public std::runtime_error {
 public:
  DistinctnessError(const std::string& what, tokens::TokenDistinctnessReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  [[nodiscard]] const tokens::TokenDistinctnessReport& report() const noexcept { return report_; }

 private:
  tokens::TokenDistinctnessReport report_;
};

[[nodiscard]] std::vector<tokens::InformationToken> build_tokens(const ExperimentConfig& config);
[[nodiscard]] tokens::TokenDistinctnessReport verify_tokens(const ExperimentConfig& config);

/// Every cohort in token order; subject and record ids run 1..N across the
/// whole experiment. Deterministic in the master seed for any `jobs`.
[[nodiscard]] std::vector<analytics::PerformanceRecord> generate_records(
    const ExperimentConfig& config, unsigned jobs = 1);

struct ClassificationResult {
  analytics::Partition partition;
  std::vector<std::string> actual;
  std::vector<std::string> predicted;
  analytics::CrossTable table;
  analytics::SuccessSummary all_tokens;  // T1:T7
  analytics::SuccessSummary guided;      // T1:T6
  double accuracy = 0.0;
};

/// split -> standardize -> KNN -> cross table -> both summaries.
[[nodiscard]] ClassificationResult classify(std::span<const analytics::PerformanceRecord> records,
                                            const ExperimentConfig& config);

struct RunManifest {
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::string version;
  std::size_t records = 0;
};

struct ReportBundle {
  std::filesystem::path output_dir;
  std::filesystem::path dataset_path;
  analytics::CohortStats stats;
  tokens::TokenDistinctnessReport distinctness;
  ClassificationResult classification;
  RunManifest manifest;
  std::vector<std::filesystem::path> files;
};

struct RunOptions {
  bool force = false;  // proceed even if token distinctness fails
  unsigned jobs = 1;
};

/// Report files for an existing dataset: data_organization.txt,
/// cohort_stats.txt, distinctness.txt, crosstable.txt, summary.txt and
/// manifest.json under config.output_dir.
[[nodiscard]] ReportBundle report_dataset(std::span<const analytics::PerformanceRecord> records,
                                          const ExperimentConfig& config);

/// tokens -> distinctness gate -> cohorts -> dataset.csv -> report_dataset.
[[nodiscard]] ReportBundle run_experiment(const ExperimentConfig& config,
                                          const RunOptions& options = {});

/// Writes text to path, throwing std::runtime_error naming the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tokenlab::harness
