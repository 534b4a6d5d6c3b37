#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <thread>
#include <vector>

#include "tokenlab/analytics/record.hpp"
#include "tokenlab/harness/config.hpp"
#include "tokenlab/market/session.hpp"
#include "tokenlab/server/protocol.hpp"
#include "tokenlab/tokens.hpp"

namespace tokenlab::server {

/// Request-level failure surfaced to clients as an error message.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string reason, const std::string& detail)
      : std::runtime_error(detail), reason_(std::move(reason)) {}
  [[nodiscard]] const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

/// Appends finalized sessions to a dataset CSV. Record ids continue from the
/// rows already in the file. Thread-safe.
class DatasetWriter {
 public:
  explicit DatasetWriter(std::filesystem::path path);

  /// Assigns record_id, writes one row and flushes. Returns the stored record.
  analytics::PerformanceRecord append(analytics::PerformanceRecord record);
  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
  std::uint64_t next_id_ = 1;
};

enum class SessionState : std::uint8_t { lobby, running, closed };
[[nodiscard]] std::string_view to_string(SessionState s) noexcept;

struct SessionOptions {
  bool fast_forward = false;
  std::chrono::milliseconds step_interval{1000};
  std::size_t book_levels = 5;
  double price_band = 0.2;
};

/// One subject trading one session. Client orders are validated on receipt
/// and submitted at the next step boundary, ahead of that step's background
/// flow, so a session driven step by step matches run_session with a
/// ScriptedController holding the same tickets.
///
/// In wall-clock mode start() launches a thread that advances one step per
/// interval; in fast-forward mode the client calls advance().
class LiveSession {
 public:
  LiveSession(std::uint64_t id, tokens::InformationToken token, const market::MarketConfig& market,
              std::uint64_t seed, SessionOptions options, DatasetWriter* writer);
  ~LiveSession();
  LiveSession(const LiveSession&) = delete;
  LiveSession& operator=(const LiveSession&) = delete;

  [[nodiscard]] std::uint64_t id() const noexcept { return id_; }
  [[nodiscard]] const std::string& token_id() const noexcept { return token_.id; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] bool fast_forward() const noexcept { return options_.fast_forward; }
  [[nodiscard]] SessionState state() const;
  [[nodiscard]] int step() const;
  [[nodiscard]] int steps() const noexcept { return steps_; }

  /// lobby -> running. Returns false if the session was not in the lobby.
  bool start();

  /// Validates and queues an order. Returns either the order_rejected
  /// message (also emitted) or {"type":"order_queued","order_ref":n}.
  json submit(const json& body);
  json submit(const market::OrderTicket& ticket);

  /// Runs up to `n` steps; returns the number run. Throws ProtocolError
  /// unless the session is a running fast-forward session.
  int advance(int n);

  /// The session's record once the clock is exhausted; nullopt before. The
  /// record is written once no matter how often this is called.
  [[nodiscard]] std::optional<analytics::PerformanceRecord> finalize();

  /// Messages with seq > after, in order.
  [[nodiscard]] std::vector<json> messages_after(std::uint64_t after) const;
  /// Blocks until a message with seq > after exists or the timeout passes.
  bool wait_for(std::uint64_t after, std::chrono::milliseconds timeout) const;
  [[nodiscard]] std::uint64_t last_seq() const;

  [[nodiscard]] json describe() const;

 private:
  struct Pending {
    std::uint64_t ref;
    market::OrderTicket ticket;
  };

  void emit_locked(json message);
  json reject_locked(std::uint64_t ref, std::string_view reason);
  void step_locked();
  void finish_locked();
  void clock_loop(std::stop_token stop);

  const std::uint64_t id_;
  const tokens::InformationToken token_;
  const std::uint64_t seed_;
  const SessionOptions options_;
  const int steps_;
  DatasetWriter* writer_;

  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  market::MarketSession market_;
  SessionState state_ = SessionState::lobby;
  std::deque<Pending> pending_;
  std::uint64_t next_ref_ = 1;
  std::map<market::OrderId, std::uint64_t> refs_;
  std::vector<json> messages_;
  std::optional<analytics::PerformanceRecord> record_;

  std::condition_variable_any clock_cv_;
  std::jthread clock_;
};

class SessionManager {
 public:
  /// Finalized sessions are appended to `dataset_path`.
  SessionManager(harness::ExperimentConfig config, std::filesystem::path dataset_path);

  /// Throws ProtocolError("unknown-token") for labels outside T1..T7. Without
  /// a seed one is derived from the master seed and the session id.
  std::shared_ptr<LiveSession> create(std::string_view token_id,
                                      std::optional<std::uint64_t> seed = std::nullopt,
                                      bool fast_forward = false);
  [[nodiscard]] std::shared_ptr<LiveSession> find(std::uint64_t id) const;
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] const harness::ExperimentConfig& config() const noexcept { return config_; }
  [[nodiscard]] DatasetWriter& writer() noexcept { return writer_; }

 private:
  harness::ExperimentConfig config_;
  std::vector<tokens::InformationToken> tokens_;
  DatasetWriter writer_;
  mutable std::mutex mutex_;
  std::map<std::uint64_t, std::shared_ptr<LiveSession>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace tokenlab::server
