#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace tokenlab::market {

using Ticks = std::int64_t;
using Shares = std::int64_t;
/// Currency in ticks x shares. Converted to dollars only when displayed.
using Money = std::int64_t;
using ParticipantId = std::int64_t;
using OrderId = std::uint64_t;
using Seq = std::uint64_t;

enum class Side : std::uint8_t { buy, sell };
enum class OrderKind : std::uint8_t { limit, market };

[[nodiscard]] constexpr Side opposite(Side s) noexcept {
  return s == Side::buy ? Side::sell : Side::buy;
}

[[nodiscard]] constexpr std::string_view to_string(Side s) noexcept {
  return s == Side::buy ? "buy" : "sell";
}

[[nodiscard]] constexpr std::string_view to_string(OrderKind k) noexcept {
  return k == OrderKind::limit ? "limit" : "market";
}

[[nodiscard]] std::optional<Side> parse_side(std::string_view s) noexcept;
[[nodiscard]] std::optional<OrderKind> parse_kind(std::string_view s) noexcept;

struct Order {
  OrderId id = 0;
  ParticipantId owner = 0;
  Side side = Side::buy;
  OrderKind kind = OrderKind::limit;
  Ticks price = 0;  // ignored for market orders
  Shares quantity = 0;
  Seq seq = 0;  // assigned by the book on submission

  friend bool operator==(const Order&, const Order&) = default;
};

struct Trade {
  Ticks price = 0;
  Shares quantity = 0;
  ParticipantId buyer = 0;
  ParticipantId seller = 0;
  Seq seq = 0;
  OrderId buy_order = 0;
  OrderId sell_order = 0;
  /// Side of the incoming (aggressing) order.
  Side aggressor = Side::buy;

  friend bool operator==(const Trade&, const Trade&) = default;
};

/// Why an order was refused before reaching the book. Empty means valid.
[[nodiscard]] std::optional<std::string_view> validate(const Order& order,
                                                       Ticks tick_size = 1) noexcept;

}  // namespace tokenlab::market
