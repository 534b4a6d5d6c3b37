#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tokenlab/market/account.hpp"
#include "tokenlab/market/flow.hpp"
#include "tokenlab/market/fundamental.hpp"
#include "tokenlab/market/order_book.hpp"
#include "tokenlab/rng.hpp"

namespace tokenlab::market {

/// Participant id of the single controlled subject in every session.
inline constexpr ParticipantId kSubjectId = 1;

struct MarketConfig {
  int steps = 390;
  Ticks tick_size = 1;
  Ticks start_price = 10000;
  double drift_target = 0.03;
  double volatility = 0.0002;
  bool allow_drift_override = false;
  FlowParams flow;
  /// Absolute inventory cap for the subject; 0 disables the check.
  Shares position_limit = 0;
  Money initial_cash = 0;
  Shares initial_inventory = 0;

  [[nodiscard]] FundamentalParams fundamental() const;

  friend bool operator==(const MarketConfig&, const MarketConfig&) = default;
};

/// An order request from a controller; ids and sequencing are assigned by the session.
struct OrderTicket {
  Side side = Side::buy;
  OrderKind kind = OrderKind::market;
  Shares quantity = 0;
  Ticks price = 0;

  friend bool operator==(const OrderTicket&, const OrderTicket&) = default;
};

/// What a controller may observe before acting at a step.
struct MarketView {
  int step = 0;
  int steps = 0;
  std::optional<Ticks> best_bid;
  std::optional<Ticks> best_ask;
  std::optional<Ticks> last_trade;
  Shares position = 0;
  Money cash = 0;
};

class Controller {
 public:
  virtual ~Controller() = default;
  virtual void decide(const MarketView& view, std::vector<OrderTicket>& out) = 0;
};

/// Replays a fixed schedule: tickets keyed by the step at which they are submitted.
class ScriptedController final : public Controller {
 public:
  using Schedule = std::map<int, std::vector<OrderTicket>>;

  explicit ScriptedController(Schedule schedule) : schedule_(std::move(schedule)) {}
  void decide(const MarketView& view, std::vector<OrderTicket>& out) override;

 private:
  Schedule schedule_;
};

enum class LogAction : std::uint8_t { submit, cancel };

/// One event of the session log. A cancel entry carries the cancelled order
/// with the quantity that was still resting.
struct LoggedOrder {
  int step = 0;
  LogAction action = LogAction::submit;
  Order order;
  SubmitStatus status = SubmitStatus::rested;
  std::string reject_reason;  // empty unless rejected

  friend bool operator==(const LoggedOrder&, const LoggedOrder&) = default;
};

struct SessionResult {
  std::uint64_t seed = 0;
  std::vector<LoggedOrder> orders;  // every submission and cancel in event order
  std::vector<Trade> trades;
  AccountBook::Map openings;
  AccountBook::Map accounts;
  Ticks closing_price = 0;
  Money subject_net_profit = 0;

  /// The subject's accepted submissions as a schedule for ScriptedController.
  [[nodiscard]] ScriptedController::Schedule subject_schedule() const;

  friend bool operator==(const SessionResult&, const SessionResult&) = default;
};

struct TicketOutcome {
  Order order;
  SubmitStatus status = SubmitStatus::rested;
  std::string reject_reason;
};

struct StepReport {
  int step = 0;
  std::vector<TicketOutcome> tickets;
  /// Trades at this step with the subject on either side, in seq order.
  std::vector<Trade> subject_fills;
};

/// One trading session as an explicit step loop.
///
/// At each step expired background orders are cancelled, then the subject's
/// tickets are submitted, then that step's background flow. Construction generates the fundamental and flow from
/// sub-seeds of `seed` and places the opening book.
class MarketSession {
 public:
  MarketSession(const MarketConfig& config, std::uint64_t seed);

  [[nodiscard]] int step() const noexcept { return step_; }
  [[nodiscard]] int steps() const noexcept { return config_.steps; }
  [[nodiscard]] bool finished() const noexcept { return step_ >= config_.steps; }
  [[nodiscard]] MarketView view() const;
  [[nodiscard]] const OrderBook& book() const noexcept { return book_; }
  [[nodiscard]] const FundamentalPath& fundamental() const noexcept { return fundamental_; }
  [[nodiscard]] std::optional<Ticks> last_trade() const noexcept { return last_trade_; }
  [[nodiscard]] const ParticipantAccount& subject() const { return accounts_.at(kSubjectId); }
  [[nodiscard]] const MarketConfig& config() const noexcept { return config_; }

  /// Validates a ticket against session rules without submitting it.
  [[nodiscard]] std::optional<std::string> check_ticket(const OrderTicket& ticket) const;

  /// Process one step. Throws std::logic_error once the session is finished.
  StepReport advance(std::span<const OrderTicket> tickets);

  /// Closing price: floor midpoint of the best quotes, else the last trade,
  /// else the terminal fundamental.
  [[nodiscard]] Ticks closing_price() const;

  [[nodiscard]] SessionResult result() const;

 private:
  Order submit(int step, ParticipantId owner, Side side, OrderKind kind, Ticks price,
               Shares qty, std::vector<Trade>* subject_fills, TicketOutcome* outcome);

  MarketConfig config_;
  std::uint64_t seed_;
  FundamentalPath fundamental_;
  std::vector<FlowEvent> flow_;
  std::size_t flow_cursor_ = 0;
  struct Expiry {
    int step;
    Order order;
  };
  std::deque<Expiry> expiries_;
  OrderBook book_;
  AccountBook accounts_;
  AccountBook::Map openings_;
  std::vector<LoggedOrder> log_;
  std::vector<Trade> trades_;
  std::optional<Ticks> last_trade_;
  OrderId next_order_id_ = 1;
  int step_ = 0;
};

/// Runs a full session with `controller` acting for the subject.
[[nodiscard]] SessionResult run_session(const MarketConfig& config, Controller& controller,
                                        std::uint64_t seed);

/// Re-submits the accepted orders of a log to a fresh book.
struct ReplayResult {
  std::vector<Trade> trades;
  AccountBook::Map accounts;
};
[[nodiscard]] ReplayResult replay(const SessionResult& session, Ticks tick_size = 1);

/// Trade-log CSV: seq,price_ticks,quantity,buyer_id,seller_id
void write_trade_log(std::ostream& out, std::span<const Trade> trades);

}  // namespace tokenlab::market
