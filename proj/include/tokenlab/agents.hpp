#pragma once

// Token-conditioned synthetic subjects.

#include <cstdint>
#include <optional>
#include <vector>

#include "tokenlab/analytics/record.hpp"
#include "tokenlab/market/session.hpp"
#include "tokenlab/rng.hpp"
#include "tokenlab/tokens.hpp"

namespace tokenlab::agents {

struct BehaviorProfile {
  /// Per-step probability of acting once the reaction delay has passed.
  double intensity = 0.5;
  int reaction_delay = 20;
  /// Mean shares per order.
  double size_factor = 3.0;
  /// Relative dispersion of order sizes.
  double noise_sd = 0.1;
  /// Buy share of orders is (1 + direction_confidence) / 2.
  double direction_confidence = 0.5;

  friend bool operator==(const BehaviorProfile&, const BehaviorProfile&) = default;
};

/// Encoding -> profile table, plus the separation dial and per-subject jitter.
///
///   signal     = (determinism + stated_probability) / 2
///   intensity  = intensity_min + (intensity_max - intensity_min) * signal
///   delay      = delay_min + delay_per_item * max(0, item_count - 1)
///   size       = size_min + (size_max - size_min) * specificity
///   confidence = 2 * stated_probability - 1      (0 for the control token)
///
/// The mapped profile is blended toward `base` by `separation`
/// (0 = every token behaves like `base`, 1 = the table value).
struct BehaviorMapping {
  double intensity_min = 0.1;
  double intensity_max = 0.9;
  int delay_min = 5;
  double delay_per_item = 10.0;
  double size_min = 1.0;
  double size_max = 5.0;
  double noise_sd = 0.1;
  double separation = 1.0;
  BehaviorProfile base;

  double intensity_jitter = 0.04;
  double delay_jitter = 2.0;
  double size_jitter = 0.08;
  double confidence_jitter = 0.0;

  friend bool operator==(const BehaviorMapping&, const BehaviorMapping&) = default;
};

/// Table value for a token, before blending and jitter.
[[nodiscard]] BehaviorProfile map_behavior(const tokens::InformationToken& token,
                                           const BehaviorMapping& mapping);

/// Blend toward base by the separation dial, then apply per-subject jitter
/// drawn from `rng`. The same draws are consumed for every token, so with
/// separation 0 all tokens yield identically distributed profiles.
[[nodiscard]] BehaviorProfile derive_behavior(const tokens::InformationToken& token,
                                              const BehaviorProfile& base,
                                              const BehaviorMapping& mapping, Rng& rng);

/// Clamp a profile into its valid ranges for a session of `steps` steps.
[[nodiscard]] BehaviorProfile clamp_profile(BehaviorProfile p, int steps);

struct AgentState {
  double side_accumulator = 0.5;
  std::uint64_t orders = 0;
};

/// At most one market order per step. Nothing before the reaction delay;
/// afterwards an order with probability `intensity`, sized around
/// `size_factor`, with buys and sells interleaved by error diffusion so the
/// buy share tracks the direction confidence.
[[nodiscard]] std::optional<market::OrderTicket> agent_step(const market::MarketView& view,
                                                            const BehaviorProfile& profile,
                                                            AgentState& state, Rng& rng);

class AgentController final : public market::Controller {
 public:
  AgentController(BehaviorProfile profile, std::uint64_t seed) : profile_(profile), rng_(seed) {}
  void decide(const market::MarketView& view, std::vector<market::OrderTicket>& out) override;
  [[nodiscard]] std::uint64_t orders() const noexcept { return state_.orders; }

 private:
  BehaviorProfile profile_;
  Rng rng_;
  AgentState state_;
};

struct CohortSpec {
  std::string token_id;
  std::size_t n_subjects = 0;
  std::uint64_t seed_base = 0;
  std::uint64_t first_subject_id = 0;
  std::uint64_t first_record_id = 0;
};

/// Outcome of one simulated subject; the session log is kept for replay.
struct SubjectRun {
  BehaviorProfile profile;
  market::SessionResult session;
};

/// Session seed of subject `index` in a cohort.
[[nodiscard]] std::uint64_t subject_seed(std::uint64_t seed_base, std::size_t index) noexcept;

/// Simulate one subject end to end.
[[nodiscard]] SubjectRun run_subject(const tokens::InformationToken& token,
                                     const market::MarketConfig& market,
                                     const BehaviorMapping& mapping, std::uint64_t session_seed);

/// One independent session per subject. Sessions run on up to `jobs`
/// threads; output order is by subject index regardless of scheduling.
/// Throws ConfigError for an empty cohort or a token id that does not match.
[[nodiscard]] std::vector<analytics::PerformanceRecord> run_cohort(
    const CohortSpec& spec, const tokens::InformationToken& token,
    const market::MarketConfig& market, const BehaviorMapping& mapping, unsigned jobs = 1);

}  // namespace tokenlab::agents
