#include "tokenlab/market/order_book.hpp"

#include <algorithm>

namespace tokenlab::market {

std::optional<Side> parse_side(std::string_view s) noexcept {
  if (s == "buy") return Side::buy;
  if (s == "sell") return Side::sell;
  return std::nullopt;
}

std::optional<OrderKind> parse_kind(std::string_view s) noexcept {
  if (s == "limit") return OrderKind::limit;
  if (s == "market") return OrderKind::market;
  return std::nullopt;
}

std::optional<std::string_view> validate(const Order& order, Ticks tick_size) noexcept {
  if (order.quantity <= 0) {
    return "quantity";
  }
  if (order.kind == OrderKind::limit) {
    if (order.price <= 0) {
      return "price";
    }
    if (tick_size > 1 && order.price % tick_size != 0) {
      return "tick-size";
    }
  }
  return std::nullopt;
}

std::string_view to_string(SubmitStatus s) noexcept {
  switch (s) {
    case SubmitStatus::rested: return "rested";
    case SubmitStatus::partially_rested: return "partially-rested";
    case SubmitStatus::filled: return "filled";
    case SubmitStatus::exhausted_liquidity: return "exhausted-liquidity";
    case SubmitStatus::rejected: return "rejected";
  }
  return "unknown";
}

namespace {

bool crosses(const Order& incoming, Ticks resting_price) {
  if (incoming.kind == OrderKind::market) {
    return true;
  }
  return incoming.side == Side::buy ? resting_price <= incoming.price
                                    : resting_price >= incoming.price;
}

}  // namespace

template <typename Levels>
void OrderBook::match_against(Levels& levels, Order& incoming, SubmitResult& result) {
  while (incoming.quantity > 0 && !levels.empty()) {
    auto level = levels.begin();
    if (!crosses(incoming, level->first)) {
      break;
    }
    Queue& queue = level->second;
    while (incoming.quantity > 0 && !queue.empty()) {
      Order& resting = queue.front();
      if (resting.owner == incoming.owner) {
        result.self_trade_cancels.push_back(resting.id);
        queue.pop_front();
        --resting_count_;
        continue;
      }
      const Shares qty = std::min(incoming.quantity, resting.quantity);
      Trade trade;
      trade.price = level->first;
      trade.quantity = qty;
      trade.seq = next_seq_++;
      trade.aggressor = incoming.side;
      if (incoming.side == Side::buy) {
        trade.buyer = incoming.owner;
        trade.buy_order = incoming.id;
        trade.seller = resting.owner;
        trade.sell_order = resting.id;
      } else {
        trade.buyer = resting.owner;
        trade.buy_order = resting.id;
        trade.seller = incoming.owner;
        trade.sell_order = incoming.id;
      }
      result.fills.push_back(trade);
      incoming.quantity -= qty;
      resting.quantity -= qty;
      if (resting.quantity == 0) {
        queue.pop_front();
        --resting_count_;
      }
    }
    if (queue.empty()) {
      levels.erase(level);
    }
  }
}

SubmitResult OrderBook::submit(Order order) {
  SubmitResult result;
  if (auto reason = validate(order, tick_size_)) {
    result.status = SubmitStatus::rejected;
    result.reject_reason = *reason;
    result.order = order;
    return result;
  }
  if (order.kind == OrderKind::market) {
    order.price = 0;
  }
  order.seq = next_seq_++;
  result.order = order;

  Order working = order;
  if (working.side == Side::buy) {
    match_against(asks_, working, result);
  } else {
    match_against(bids_, working, result);
  }

  if (working.quantity == 0) {
    result.status = SubmitStatus::filled;
    return result;
  }
  if (working.kind == OrderKind::market) {
    result.status = SubmitStatus::exhausted_liquidity;
    result.cancelled_quantity = working.quantity;
    return result;
  }
  result.resting_quantity = working.quantity;
  result.status = result.fills.empty() ? SubmitStatus::rested : SubmitStatus::partially_rested;
  if (working.side == Side::buy) {
    bids_[working.price].push_back(working);
  } else {
    asks_[working.price].push_back(working);
  }
  ++resting_count_;
  return result;
}

namespace {

template <typename Levels>
Shares remove_order(Levels& levels, Ticks price, OrderId id) {
  auto level = levels.find(price);
  if (level == levels.end()) return 0;
  auto& queue = level->second;
  auto it = std::find_if(queue.begin(), queue.end(), [id](const Order& o) { return o.id == id; });
  if (it == queue.end()) return 0;
  const Shares qty = it->quantity;
  queue.erase(it);
  if (queue.empty()) levels.erase(level);
  return qty;
}

}  // namespace

Shares OrderBook::cancel(Side side, Ticks price, OrderId id) {
  const Shares qty =
      side == Side::buy ? remove_order(bids_, price, id) : remove_order(asks_, price, id);
  if (qty > 0) --resting_count_;
  return qty;
}

std::optional<Ticks> OrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.begin()->first;
}

std::optional<Ticks> OrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.begin()->first;
}

namespace {

template <typename Levels>
std::vector<LevelView> collect_depth(const Levels& levels, std::size_t n) {
  std::vector<LevelView> out;
  out.reserve(std::min(n, levels.size()));
  for (const auto& [price, queue] : levels) {
    if (out.size() == n) break;
    LevelView view{price, 0, queue.size()};
    for (const auto& o : queue) view.quantity += o.quantity;
    out.push_back(view);
  }
  return out;
}

}  // namespace

std::vector<LevelView> OrderBook::depth(Side side, std::size_t levels) const {
  return side == Side::buy ? collect_depth(bids_, levels) : collect_depth(asks_, levels);
}

std::vector<Order> OrderBook::level_orders(Side side, Ticks price) const {
  if (side == Side::buy) {
    auto it = bids_.find(price);
    if (it == bids_.end()) return {};
    return {it->second.begin(), it->second.end()};
  }
  auto it = asks_.find(price);
  if (it == asks_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

bool OrderBook::sane() const {
  if (!bids_.empty() && !asks_.empty() && bids_.begin()->first >= asks_.begin()->first) {
    return false;
  }
  auto positive = [](const auto& levels) {
    return std::all_of(levels.begin(), levels.end(), [](const auto& level) {
      return !level.second.empty() &&
             std::all_of(level.second.begin(), level.second.end(),
                         [](const Order& o) { return o.quantity > 0; });
    });
  };
  return positive(bids_) && positive(asks_);
}

}  // namespace tokenlab::market
