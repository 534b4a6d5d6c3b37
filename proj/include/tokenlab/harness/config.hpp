#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tokenlab/agents.hpp"
#include "tokenlab/analytics/knn.hpp"
#include "tokenlab/analytics/split.hpp"
#include "tokenlab/market/session.hpp"
#include "tokenlab/tokens.hpp"

namespace tokenlab::harness {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kConfigEnvVar = "TOKENLAB_CONFIG";

struct ServerConfig {
  /// Wall-clock interval between session steps for live (non fast-forward) play.
  int step_interval_ms = 1000;
  std::size_t book_levels = 5;
  /// Limit prices must lie within +-price_band of the reference price.
  double price_band = 0.20;
  std::string dataset_path = "sessions.csv";

  friend bool operator==(const ServerConfig&, const ServerConfig&) = default;
};

struct ExperimentConfig {
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";

  tokens::InformationVirtue virtue;
  tokens::TokenTemplates templates;
  double distinctness_threshold = 0.1;
  double item_count_scale = 12.0;

  agents::BehaviorMapping behavior;
  market::MarketConfig market;
  /// Drift used in control-token sessions; empty keeps the common drift.
  std::optional<double> control_drift_target;

  /// Subjects per token label, T1..T7.
  std::map<std::string, std::size_t> cohorts;
  analytics::SplitSpec split;
  analytics::KnnConfig knn;
  std::vector<std::string> extra_features;
  ServerConfig server;

  /// Market parameters for sessions under the given token.
  [[nodiscard]] market::MarketConfig market_for(const tokens::InformationToken& token) const;
};

/// Parse and validate. Throws ConfigError naming the offending JSON path;
/// unknown keys are rejected.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical JSON serialization, as 16 hex digits.
[[nodiscard]] std::string config_hash(const ExperimentConfig& config);

/// --config value, else $TOKENLAB_CONFIG, else empty.
[[nodiscard]] std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::string>& flag);

}  // namespace tokenlab::harness
