#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "tokenlab/analytics/crosstable.hpp"
#include "tokenlab/error.hpp"
#include "tokenlab/harness/config.hpp"
#include "tokenlab/harness/dataset.hpp"
#include "tokenlab/harness/experiment.hpp"
#include "tokenlab/harness/report.hpp"
#include "tokenlab/server/http_server.hpp"
#include "tokenlab/tokens.hpp"

namespace fs = std::filesystem;
using namespace tokenlab;

namespace {

struct Common {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Experiment config JSON (default: $TOKENLAB_CONFIG)");
  cmd->add_option("--seed", c.seed, "Override the master seed");
  cmd->add_option("--out", c.out, "Output directory (overrides output_dir)");
  cmd->add_option("--jobs", c.jobs, "Worker threads for cohort simulation")
      ->check(CLI::PositiveNumber);
}

harness::ExperimentConfig load(const Common& c) {
  const auto path = harness::resolve_config_path(c.config);
  if (!path) {
    throw ConfigError("no config given: pass --config or set TOKENLAB_CONFIG");
  }
  auto cfg = harness::load_config(*path);
  if (c.seed) {
    cfg.master_seed = *c.seed;
    cfg.split.seed = *c.seed;
  }
  if (c.out) cfg.output_dir = *c.out;
  return cfg;
}

fs::path dataset_or_default(const std::optional<std::string>& flag,
                            const harness::ExperimentConfig& cfg) {
  return flag ? fs::path(*flag) : fs::path(cfg.output_dir) / "dataset.csv";
}

void print_summaries(const harness::ClassificationResult& c) {
  const std::array<analytics::SuccessSummary, 2> rows{c.all_tokens, c.guided};
  std::cout << harness::render_success_summary(rows);
}

// actual,predicted per line, optional header.
std::pair<std::vector<std::string>, std::vector<std::string>> read_pairs(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::string> actual;
  std::vector<std::string> predicted;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (n == 1 && line.rfind("actual", 0) == 0)) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw DataError(path.string() + " line " + std::to_string(n) + ": expected actual,predicted");
    }
    actual.push_back(line.substr(0, comma));
    predicted.push_back(line.substr(comma + 1));
  }
  return {actual, predicted};
}

int cmd_generate(const Common& c, bool force) {
  const auto cfg = load(c);
  const auto distinct = harness::verify_tokens(cfg);
  if (!distinct.sufficient && !force) {
    std::cerr << tokens::render_distinctness(distinct)
              << "error: token set is not sufficiently distinct (use --force to override)\n";
    return 3;
  }
  fs::create_directories(cfg.output_dir);
  const auto records = harness::generate_records(cfg, c.jobs);
  const auto path = fs::path(cfg.output_dir) / "dataset.csv";
  harness::export_dataset(records, path);
  std::cout << "wrote " << records.size() << " records to " << path.string() << '\n';
  return 0;
}

int cmd_classify(const Common& c, const std::optional<std::string>& dataset) {
  const auto cfg = load(c);
  const auto records = harness::import_dataset(dataset_or_default(dataset, cfg));
  const auto result = harness::classify(records, cfg);
  fs::create_directories(cfg.output_dir);
  harness::write_text_file(fs::path(cfg.output_dir) / "crosstable.txt",
                           harness::render_crosstable_text(result.table));
  print_summaries(result);
  return 0;
}

int cmd_report(const Common& c, const std::optional<std::string>& dataset,
               const std::optional<std::string>& pairs) {
  const auto cfg = load(c);
  if (pairs) {
    const auto [actual, predicted] = read_pairs(*pairs);
    const auto ct = analytics::cross_table(actual, predicted, tokens::token_labels());
    const std::array<analytics::SuccessSummary, 2> rows{
        analytics::summarize_all(ct), analytics::summarize_leading(ct, tokens::kGuidedTokenCount)};
    std::cout << harness::render_crosstable_text(ct) << '\n'
              << harness::render_success_summary(rows);
    return 0;
  }
  const auto records = harness::import_dataset(dataset_or_default(dataset, cfg));
  const auto bundle = harness::report_dataset(records, cfg);
  std::cout << harness::render_crosstable_text(bundle.classification.table) << '\n';
  print_summaries(bundle.classification);
  for (const auto& f : bundle.files) std::cout << "wrote " << f.string() << '\n';
  return 0;
}

int cmd_run(const Common& c, bool force) {
  const auto cfg = load(c);
  harness::RunOptions opts;
  opts.force = force;
  opts.jobs = c.jobs;
  const auto bundle = harness::run_experiment(cfg, opts);
  print_summaries(bundle.classification);
  for (const auto& f : bundle.files) std::cout << "wrote " << f.string() << '\n';
  return 0;
}

int cmd_verify_tokens(const Common& c) {
  const auto report = harness::verify_tokens(load(c));
  std::cout << tokens::render_distinctness(report);
  return report.sufficient ? 0 : 3;
}

int cmd_serve(const Common& c, const std::string& host, int port) {
  const auto cfg = load(c);
  fs::path dataset = cfg.server.dataset_path;
  if (dataset.is_relative()) dataset = fs::path(cfg.output_dir) / dataset;

  // Block the stop signals in every thread; the main thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  server::SessionManager manager(cfg, dataset);
  server::HttpServer http(manager);
  const int bound = http.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ':' << port << '\n';
    return 1;
  }
  std::cout << "listening on http://" << host << ':' << bound << " (dataset "
            << dataset.string() << ")" << std::endl;
  std::thread listener([&http] { http.listen(); });
  int sig = 0;
  sigwait(&signals, &sig);
  std::cout << "shutting down" << std::endl;
  http.stop();
  listener.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information token market lab"};
  app.set_version_flag("--version", std::string(harness::library_version()));
  app.require_subcommand(1);

  Common common;
  bool force = false;
  std::optional<std::string> dataset;
  std::optional<std::string> pairs;
  std::string host = "127.0.0.1";
  int port = 8080;

  auto* generate = app.add_subcommand("generate", "Simulate every cohort and write dataset.csv");
  add_common(generate, common);
  generate->add_flag("--force", force, "Proceed even if the token set is not distinct");

  auto* classify = app.add_subcommand("classify", "Split, standardize and KNN-classify a dataset");
  add_common(classify, common);
  classify->add_option("--dataset", dataset, "Dataset CSV (default: <out>/dataset.csv)");

  auto* report = app.add_subcommand("report", "Write all report files for a dataset");
  add_common(report, common);
  report->add_option("--dataset", dataset, "Dataset CSV (default: <out>/dataset.csv)");
  report->add_option("--pairs", pairs, "Render a cross table from actual,predicted pairs instead");

  auto* verify = app.add_subcommand("verify-tokens", "Print the token distinctness report");
  add_common(verify, common);

  auto* serve = app.add_subcommand("serve", "Run the live session server");
  add_common(serve, common);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));

  auto* run = app.add_subcommand("run", "generate followed by report");
  add_common(run, common);
  run->add_flag("--force", force, "Proceed even if the token set is not distinct");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(common, force);
    if (*classify) return cmd_classify(common, dataset);
    if (*report) return cmd_report(common, dataset, pairs);
    if (*verify) return cmd_verify_tokens(common);
    if (*serve) return cmd_serve(common, host, port);
    if (*run) return cmd_run(common, force);
  } catch (const harness::DistinctnessError& e) {
    std::cerr << tokens::render_distinctness(e.report()) << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
