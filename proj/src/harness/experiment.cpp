#include "tokenlab/harness/experiment.hpp"

#include <fstream>

#include "tokenlab/agents.hpp"
#include "tokenlab/analytics/knn.hpp"
#include "tokenlab/harness/dataset.hpp"
#include "tokenlab/harness/report.hpp"
#include "tokenlab/rng.hpp"

#ifndef TOKENLAB_VERSION
#define TOKENLAB_VERSION "0.0.0"
#endif

namespace tokenlab::harness {

std::string_view library_version() noexcept { return TOKENLAB_VERSION; }

std::vector<tokens::InformationToken> build_tokens(const ExperimentConfig& config) {
  return tokens::build_token_set(config.virtue, config.templates);
}

tokens::TokenDistinctnessReport verify_tokens(const ExperimentConfig& config) {
  return tokens::check_distinctness(build_tokens(config), config.distinctness_threshold,
                                    config.item_count_scale);
}

std::vector<analytics::PerformanceRecord> generate_records(const ExperimentConfig& config,
                                                           unsigned jobs) {
  const auto token_set = build_tokens(config);
  std::vector<analytics::PerformanceRecord> records;
  std::uint64_t next_id = 1;
  for (const auto& token : token_set) {
    agents::CohortSpec spec;
    spec.token_id = token.id;
    spec.n_subjects = config.cohorts.at(token.id);
    spec.seed_base = derive_seed(config.master_seed, Stream::cohort, token.index);
    spec.first_subject_id = next_id;
    spec.first_record_id = next_id;
    auto cohort =
        agents::run_cohort(spec, token, config.market_for(token), config.behavior, jobs);
    next_id += cohort.size();
    records.insert(records.end(), std::make_move_iterator(cohort.begin()),
                   std::make_move_iterator(cohort.end()));
  }
  return records;
}

ClassificationResult classify(std::span<const analytics::PerformanceRecord> records,
                              const ExperimentConfig& config) {
  ClassificationResult out;
  out.partition = analytics::split(records, config.split);
  const auto classes = tokens::token_labels();
  out.predicted = analytics::classify_records(out.partition.train, out.partition.test, config.knn,
                                              classes, config.extra_features);
  for (const auto& r : out.partition.test) out.actual.push_back(r.token_label);
  out.table = analytics::cross_table(out.actual, out.predicted, classes);
  out.all_tokens = analytics::summarize_all(out.table);
  out.guided = analytics::summarize_leading(out.table, tokens::kGuidedTokenCount);
  out.accuracy = out.table.total == 0 ? 0.0
                                      : static_cast<double>(out.table.trace()) /
                                            static_cast<double>(out.table.total);
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
  out.flush();
  if (!out) {
    throw std::runtime_error("error writing " + path.string());
  }
}

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                             ec.message());
  }
}

}  // namespace

ReportBundle report_dataset(std::span<const analytics::PerformanceRecord> records,
                            const ExperimentConfig& config) {
  ReportBundle bundle;
  bundle.output_dir = config.output_dir;
  ensure_dir(bundle.output_dir);
  bundle.stats = analytics::cohort_stats(records);
  bundle.distinctness = verify_tokens(config);
  bundle.classification = classify(records, config);
  bundle.manifest = {config_hash(config), config.master_seed, std::string(library_version()),
                     records.size()};

  const auto& c = bundle.classification;
  const std::array<analytics::SuccessSummary, 2> summaries{c.all_tokens, c.guided};
  const std::vector<std::pair<std::string, std::string>> files{
      {"data_organization.txt", render_data_organization(c.partition)},
      {"cohort_stats.txt", render_cohort_stats(bundle.stats)},
      {"distinctness.txt", tokens::render_distinctness(bundle.distinctness)},
      {"crosstable.txt", render_crosstable_text(c.table)},
      {"summary.txt", render_success_summary(summaries)},
  };
  for (const auto& [name, text] : files) {
    const auto path = bundle.output_dir / name;
    write_text_file(path, text);
    bundle.files.push_back(path);
  }

  nlohmann::json manifest = {
      {"config_hash", bundle.manifest.config_hash},
      {"master_seed", bundle.manifest.master_seed},
      {"version", bundle.manifest.version},
      {"records", bundle.manifest.records},
      {"config", to_json(config)},
  };
  const auto manifest_path = bundle.output_dir / "manifest.json";
  write_text_file(manifest_path, manifest.dump(2) + "\n");
  bundle.files.push_back(manifest_path);
  return bundle;
}

ReportBundle run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  auto distinctness = verify_tokens(config);
  if (!distinctness.sufficient && !options.force) {
    throw DistinctnessError("token set is not sufficiently distinct (min distance " +
                                std::to_string(distinctness.min_offdiagonal_guided) +
                                " <= threshold " + std::to_string(distinctness.threshold) + ")",
                            std::move(distinctness));
  }
  ensure_dir(config.output_dir);
  const auto records = generate_records(config, options.jobs);
  const auto dataset_path = std::filesystem::path(config.output_dir) / "dataset.csv";
  export_dataset(records, dataset_path);
  ReportBundle bundle = report_dataset(records, config);
  bundle.dataset_path = dataset_path;
  bundle.files.insert(bundle.files.begin(), dataset_path);
  return bundle;
}

}  // namespace tokenlab::harness
