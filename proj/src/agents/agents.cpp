#include "tokenlab/agents.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "tokenlab/error.hpp"

namespace tokenlab::agents {

BehaviorProfile map_behavior(const tokens::InformationToken& token, const BehaviorMapping& m) {
  const tokens::Encoding e = tokens::encode_token(token);
  BehaviorProfile p;
  const double signal = (e.determinism + e.stated_probability) / 2.0;
  p.intensity = m.intensity_min + (m.intensity_max - m.intensity_min) * signal;
  const double extra_items = std::max(0.0, e.item_count - 1.0);
  p.reaction_delay = m.delay_min + static_cast<int>(std::lround(m.delay_per_item * extra_items));
  p.size_factor = m.size_min + (m.size_max - m.size_min) * e.specificity;
  p.noise_sd = m.noise_sd;
  p.direction_confidence = token.is_control() ? 0.0 : 2.0 * e.stated_probability - 1.0;
  return p;
}

BehaviorProfile clamp_profile(BehaviorProfile p, int steps) {
  p.intensity = std::clamp(p.intensity, 0.0, 1.0);
  p.reaction_delay = std::clamp(p.reaction_delay, 0, std::max(0, steps - 1));
  p.size_factor = std::max(0.0, p.size_factor);
  p.noise_sd = std::max(0.0, p.noise_sd);
  p.direction_confidence = std::clamp(p.direction_confidence, -1.0, 1.0);
  return p;
}

BehaviorProfile derive_behavior(const tokens::InformationToken& token, const BehaviorProfile& base,
                                const BehaviorMapping& m, Rng& rng) {
  const BehaviorProfile table = map_behavior(token, m);
  const double s = m.separation;
  auto blend = [s](double b, double t) { return b + s * (t - b); };

  BehaviorProfile p;
  p.intensity = blend(base.intensity, table.intensity);
  const double delay = blend(base.reaction_delay, table.reaction_delay);
  p.size_factor = blend(base.size_factor, table.size_factor);
  p.noise_sd = blend(base.noise_sd, table.noise_sd);
  p.direction_confidence = blend(base.direction_confidence, table.direction_confidence);

  // Fixed draw order: the same four normals for every token.
  const double z_intensity = rng.normal();
  const double z_delay = rng.normal();
  const double z_size = rng.normal();
  const double z_confidence = rng.normal();
  p.intensity += m.intensity_jitter * z_intensity;
  p.reaction_delay = static_cast<int>(std::lround(delay + m.delay_jitter * z_delay));
  p.size_factor *= 1.0 + m.size_jitter * z_size;
  p.direction_confidence += m.confidence_jitter * z_confidence;
  return p;
}

std::optional<market::OrderTicket> agent_step(const market::MarketView& view,
                                              const BehaviorProfile& profile, AgentState& state,
                                              Rng& rng) {
  if (view.step < profile.reaction_delay || profile.intensity <= 0.0) {
    return std::nullopt;
  }
  if (!rng.bernoulli(profile.intensity)) {
    return std::nullopt;
  }
  const double size = profile.size_factor * (1.0 + profile.noise_sd * rng.normal());
  const auto qty = std::max<market::Shares>(1, std::llround(size));

  state.side_accumulator += (1.0 + profile.direction_confidence) / 2.0;
  market::Side side = market::Side::sell;
  if (state.side_accumulator >= 1.0) {
    side = market::Side::buy;
    state.side_accumulator -= 1.0;
  }
  ++state.orders;
  return market::OrderTicket{side, market::OrderKind::market, qty, 0};
}

void AgentController::decide(const market::MarketView& view,
                             std::vector<market::OrderTicket>& out) {
  if (auto ticket = agent_step(view, profile_, state_, rng_)) {
    out.push_back(*ticket);
  }
}

std::uint64_t subject_seed(std::uint64_t seed_base, std::size_t index) noexcept {
  return derive_seed(seed_base, Stream::subject, index);
}

SubjectRun run_subject(const tokens::InformationToken& token, const market::MarketConfig& market,
                       const BehaviorMapping& mapping, std::uint64_t session_seed) {
  Rng behavior_rng(derive_seed(session_seed, Stream::behavior));
  const BehaviorProfile profile =
      clamp_profile(derive_behavior(token, mapping.base, mapping, behavior_rng), market.steps);
  AgentController agent(profile, derive_seed(session_seed, Stream::agent));
  return {profile, market::run_session(market, agent, session_seed)};
}

std::vector<analytics::PerformanceRecord> run_cohort(const CohortSpec& spec,
                                                     const tokens::InformationToken& token,
                                                     const market::MarketConfig& market,
                                                     const BehaviorMapping& mapping,
                                                     unsigned jobs) {
  if (spec.n_subjects == 0) {
    throw ConfigError("cohort " + spec.token_id + ": n_subjects must be positive (empty cohort)");
  }
  if (spec.token_id != token.id) {
    throw ConfigError("cohort " + spec.token_id + ": token mismatch (" + token.id + ")");
  }
  std::vector<analytics::PerformanceRecord> records(spec.n_subjects);
  auto simulate = [&](std::size_t i) {
    const std::uint64_t seed = subject_seed(spec.seed_base, i);
    const SubjectRun run = run_subject(token, market, mapping, seed);
    auto& r = records[i];
    r.record_id = spec.first_record_id + i;
    r.subject_id = spec.first_subject_id + i;
    r.token_label = token.id;
    r.net_profit = static_cast<double>(run.session.subject_net_profit);
    r.seed = seed;
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(spec.n_subjects)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < spec.n_subjects; ++i) simulate(i);
    return records;
  }
  // Strided partition; each slot is written by exactly one worker.
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < spec.n_subjects; i += jobs) simulate(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

}  // namespace tokenlab::agents
