#include "tokenlab/server/session_manager.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tokenlab/harness/dataset.hpp"
#include "tokenlab/rng.hpp"

namespace tokenlab::server {

DatasetWriter::DatasetWriter(std::filesystem::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (std::filesystem::exists(path_, ec) && std::filesystem::file_size(path_, ec) > 0) {
    for (const auto& r : harness::import_dataset(path_)) {
      next_id_ = std::max(next_id_, r.record_id + 1);
    }
    return;
  }
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path(), ec);
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path_.string());
  out << harness::kDatasetHeader << '\n';
}

analytics::PerformanceRecord DatasetWriter::append(analytics::PerformanceRecord record) {
  std::lock_guard lock(mutex_);
  record.record_id = next_id_;
  std::ostringstream row;
  harness::write_dataset(row, std::span(&record, 1));
  const std::string text = row.str();
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  out << text.substr(text.find('\n') + 1);
  out.flush();
  if (!out) throw std::runtime_error("error writing " + path_.string());
  ++next_id_;
  return record;
}

std::string_view to_string(SessionState s) noexcept {
  switch (s) {
    case SessionState::lobby: return "lobby";
    case SessionState::running: return "running";
    case SessionState::closed: return "closed";
  }
  return "unknown";
}

LiveSession::LiveSession(std::uint64_t id, tokens::InformationToken token,
                         const market::MarketConfig& market, std::uint64_t seed,
                         SessionOptions options, DatasetWriter* writer)
    : id_(id),
      token_(std::move(token)),
      seed_(seed),
      options_(options),
      steps_(market.steps),
      writer_(writer),
      market_(market, seed) {
  std::lock_guard lock(mutex_);
  emit_locked(msg::token_artifact(token_));
  emit_locked(msg::book_snapshot(market_.book(), market_.last_trade(), options_.book_levels, 0));
}

LiveSession::~LiveSession() {
  clock_.request_stop();
  clock_cv_.notify_all();
}

SessionState LiveSession::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

int LiveSession::step() const {
  std::lock_guard lock(mutex_);
  return market_.step();
}

bool LiveSession::start() {
  {
    std::lock_guard lock(mutex_);
    if (state_ != SessionState::lobby) return false;
    state_ = SessionState::running;
    emit_locked(msg::clock_tick(market_.step(), steps_));
  }
  if (!options_.fast_forward) {
    clock_ = std::jthread([this](std::stop_token stop) { clock_loop(stop); });
  }
  return true;
}

void LiveSession::clock_loop(std::stop_token stop) {
  std::mutex m;
  std::unique_lock lk(m);
  while (!stop.stop_requested()) {
    clock_cv_.wait_for(lk, stop, options_.step_interval, [] { return false; });
    if (stop.stop_requested()) return;
    std::lock_guard lock(mutex_);
    if (state_ != SessionState::running) return;
    step_locked();
  }
}

void LiveSession::emit_locked(json message) {
  message["seq"] = messages_.size() + 1;
  messages_.push_back(std::move(message));
  cv_.notify_all();
}

json LiveSession::reject_locked(std::uint64_t ref, std::string_view reason) {
  json m = msg::order_rejected(ref, reason);
  emit_locked(m);
  return messages_.back();
}

json LiveSession::submit(const json& body) {
  auto parsed = parse_ticket(body);
  if (auto* reason = std::get_if<std::string>(&parsed)) {
    std::lock_guard lock(mutex_);
    return reject_locked(next_ref_++, *reason);
  }
  return submit(std::get<market::OrderTicket>(parsed));
}

json LiveSession::submit(const market::OrderTicket& ticket) {
  std::lock_guard lock(mutex_);
  const std::uint64_t ref = next_ref_++;
  if (state_ == SessionState::closed) return reject_locked(ref, "closed");
  if (state_ == SessionState::lobby) return reject_locked(ref, "not-started");
  if (auto reason = market_.check_ticket(ticket)) return reject_locked(ref, *reason);
  if (ticket.kind == market::OrderKind::limit) {
    const double anchor =
        static_cast<double>(market_.last_trade().value_or(market_.config().start_price));
    if (std::abs(static_cast<double>(ticket.price) - anchor) > options_.price_band * anchor) {
      return reject_locked(ref, "price-band");
    }
  }
  pending_.push_back({ref, ticket});
  return json{{"type", "order_queued"}, {"v", kProtocolVersion}, {"order_ref", ref}};
}

void LiveSession::step_locked() {
  std::vector<market::OrderTicket> tickets;
  std::vector<std::uint64_t> refs;
  for (const auto& p : pending_) {
    tickets.push_back(p.ticket);
    refs.push_back(p.ref);
  }
  pending_.clear();

  const auto report = market_.advance(tickets);
  for (std::size_t i = 0; i < report.tickets.size(); ++i) {
    const auto& t = report.tickets[i];
    if (t.status == market::SubmitStatus::rejected) {
      emit_locked(msg::order_rejected(refs[i], t.reject_reason));
    } else {
      refs_[t.order.id] = refs[i];
      emit_locked(msg::order_accepted(refs[i], t.order, t.status));
    }
  }
  for (const auto& trade : report.subject_fills) {
    const bool buy = trade.buyer == market::kSubjectId;
    const auto order_id = buy ? trade.buy_order : trade.sell_order;
    const auto it = refs_.find(order_id);
    emit_locked(msg::fill(it == refs_.end() ? 0 : it->second, trade,
                          buy ? market::Side::buy : market::Side::sell));
  }
  emit_locked(msg::clock_tick(market_.step(), steps_));
  emit_locked(msg::book_snapshot(market_.book(), market_.last_trade(), options_.book_levels,
                                 market_.step()));
  if (market_.finished()) finish_locked();
}

void LiveSession::finish_locked() {
  const auto result = market_.result();
  analytics::PerformanceRecord record;
  record.subject_id = id_;
  record.token_label = token_.id;
  record.net_profit = static_cast<double>(result.subject_net_profit);
  record.seed = seed_;
  record_ = writer_ != nullptr ? writer_->append(std::move(record)) : std::move(record);
  state_ = SessionState::closed;
  emit_locked(msg::session_end(record_->net_profit, result.closing_price));
}

int LiveSession::advance(int n) {
  if (!options_.fast_forward) {
    throw ProtocolError("not-fast-forward",
                        "session " + std::to_string(id_) + " runs on the wall clock");
  }
  std::lock_guard lock(mutex_);
  if (state_ != SessionState::running) {
    throw ProtocolError("not-running", "session " + std::to_string(id_) + " is " +
                                           std::string(to_string(state_)));
  }
  int done = 0;
  while (done < n && state_ == SessionState::running) {
    step_locked();
    ++done;
  }
  return done;
}

std::optional<analytics::PerformanceRecord> LiveSession::finalize() {
  std::lock_guard lock(mutex_);
  return record_;
}

std::vector<json> LiveSession::messages_after(std::uint64_t after) const {
  std::lock_guard lock(mutex_);
  if (after >= messages_.size()) return {};
  return {messages_.begin() + static_cast<std::ptrdiff_t>(after), messages_.end()};
}

bool LiveSession::wait_for(std::uint64_t after, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  return cv_.wait_for(lock, timeout, [&] { return messages_.size() > after; });
}

std::uint64_t LiveSession::last_seq() const {
  std::lock_guard lock(mutex_);
  return messages_.size();
}

json LiveSession::describe() const {
  std::lock_guard lock(mutex_);
  json d = {{"session_id", id_},
            {"token_id", token_.id},
            {"state", to_string(state_)},
            {"step", market_.step()},
            {"steps", steps_},
            {"seed", seed_},
            {"fast_forward", options_.fast_forward},
            {"last_seq", messages_.size()}};
  if (record_) {
    d["net_profit"] = record_->net_profit;
    d["record_id"] = record_->record_id;
  }
  return d;
}

SessionManager::SessionManager(harness::ExperimentConfig config,
                               std::filesystem::path dataset_path)
    : config_(std::move(config)),
      tokens_(tokens::build_token_set(config_.virtue, config_.templates)),
      writer_(std::move(dataset_path)) {}

std::shared_ptr<LiveSession> SessionManager::create(std::string_view token_id,
                                                    std::optional<std::uint64_t> seed,
                                                    bool fast_forward) {
  const auto index = tokens::token_index(token_id);
  if (!index) {
    throw ProtocolError("unknown-token", "unknown token '" + std::string(token_id) + "'");
  }
  const auto& token = tokens_.at(*index);
  SessionOptions options;
  options.fast_forward = fast_forward;
  options.step_interval = std::chrono::milliseconds(config_.server.step_interval_ms);
  options.book_levels = config_.server.book_levels;
  options.price_band = config_.server.price_band;

  std::lock_guard lock(mutex_);
  const std::uint64_t id = next_id_++;
  const std::uint64_t s = seed.value_or(derive_seed(config_.master_seed, Stream::session, id));
  auto session =
      std::make_shared<LiveSession>(id, token, config_.market_for(token), s, options, &writer_);
  sessions_.emplace(id, session);
  return session;
}

std::shared_ptr<LiveSession> SessionManager::find(std::uint64_t id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace tokenlab::server
