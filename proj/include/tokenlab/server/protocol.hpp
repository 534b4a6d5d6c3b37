#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "tokenlab/market/order_book.hpp"
#include "tokenlab/market/session.hpp"
#include "tokenlab/tokens.hpp"

namespace tokenlab::server {

using json = nlohmann::json;

inline constexpr int kProtocolVersion = 1;

// Server -> client messages. Every message carries "type" and "v"; the
// session adds a per-session "seq" starting at 1 when it emits them.
namespace msg {

[[nodiscard]] json token_artifact(const tokens::InformationToken& token);
/// Top `levels` of each side plus the last trade price (null if none).
[[nodiscard]] json book_snapshot(const market::OrderBook& book,
                                 std::optional<market::Ticks> last_trade, std::size_t levels,
                                 int step);
[[nodiscard]] json clock_tick(int step, int steps);
[[nodiscard]] json order_accepted(std::uint64_t order_ref, const market::Order& order,
                                  market::SubmitStatus status);
[[nodiscard]] json order_rejected(std::uint64_t order_ref, std::string_view reason);
/// `side` is the subject's side of the trade.
[[nodiscard]] json fill(std::uint64_t order_ref, const market::Trade& trade, market::Side side);
[[nodiscard]] json session_end(double net_profit, market::Ticks closing_price);
[[nodiscard]] json error(std::string_view reason, std::string_view detail = {});

}  // namespace msg

/// `<decimal byte length>\n<json>`.
[[nodiscard]] std::string frame(const json& message);

/// Incremental decoder for a stream of frames.
class FrameReader {
 public:
  void feed(std::string_view bytes);
  /// Next complete message, if one is buffered. Throws std::runtime_error on
  /// a malformed length prefix.
  [[nodiscard]] std::optional<json> next();

 private:
  std::string buffer_;
};

/// Client order body: {side, kind?, qty, price?}. kind defaults to market;
/// price is required for limit orders. Unknown fields are ignored. On
/// failure returns the rejection reason.
[[nodiscard]] std::variant<market::OrderTicket, std::string> parse_ticket(const json& body);

/// JSON Schema (draft 2020-12) for every message type and request body.
[[nodiscard]] const json& protocol_schema();

}  // namespace tokenlab::server
