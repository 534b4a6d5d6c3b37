#include "tokenlab/market/session.hpp"

#include <ostream>
#include <stdexcept>

namespace tokenlab::market {

FundamentalParams MarketConfig::fundamental() const {
  FundamentalParams p;
  p.start_price = start_price;
  p.steps = steps;
  p.drift_target = drift_target;
  p.volatility = volatility;
  p.tick_size = tick_size;
  p.allow_drift_override = allow_drift_override;
  return p;
}

void ScriptedController::decide(const MarketView& view, std::vector<OrderTicket>& out) {
  auto it = schedule_.find(view.step);
  if (it != schedule_.end()) {
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
}

ScriptedController::Schedule SessionResult::subject_schedule() const {
  ScriptedController::Schedule schedule;
  for (const auto& entry : orders) {
    if (entry.action != LogAction::submit || entry.order.owner != kSubjectId ||
        entry.status == SubmitStatus::rejected) {
      continue;
    }
    schedule[entry.step].push_back(
        {entry.order.side, entry.order.kind, entry.order.quantity, entry.order.price});
  }
  return schedule;
}

MarketSession::MarketSession(const MarketConfig& config, std::uint64_t seed)
    : config_(config),
      seed_(seed),
      fundamental_(generate_fundamental(derive_seed(seed, Stream::fundamental), config.fundamental())),
      flow_(generate_background_flow(derive_seed(seed, Stream::flow), config.flow, fundamental_,
                                     config.tick_size)),
      book_(config.tick_size) {
  accounts_.open(kSubjectId, config.initial_cash, config.initial_inventory);
  for (int i = 0; i < config.flow.traders; ++i) {
    accounts_.open(config.flow.first_trader_id + i);
  }
  openings_ = accounts_.all();
  for (const auto& e : opening_book(config.flow, fundamental_.values.front(), config.tick_size)) {
    submit(0, e.owner, e.side, e.kind, e.price, e.quantity, nullptr, nullptr);
  }
}

MarketView MarketSession::view() const {
  MarketView v;
  v.step = step_;
  v.steps = config_.steps;
  v.best_bid = book_.best_bid();
  v.best_ask = book_.best_ask();
  v.last_trade = last_trade_;
  const auto& subj = accounts_.at(kSubjectId);
  v.position = subj.inventory;
  v.cash = subj.cash;
  return v;
}

std::optional<std::string> MarketSession::check_ticket(const OrderTicket& ticket) const {
  Order probe;
  probe.side = ticket.side;
  probe.kind = ticket.kind;
  probe.quantity = ticket.quantity;
  probe.price = ticket.price;
  if (auto reason = validate(probe, config_.tick_size)) {
    return std::string(*reason);
  }
  if (config_.position_limit > 0) {
    const Shares inv = accounts_.at(kSubjectId).inventory;
    const Shares after = ticket.side == Side::buy ? inv + ticket.quantity : inv - ticket.quantity;
    if (after > config_.position_limit || after < -config_.position_limit) {
      return std::string("position-limit");
    }
  }
  return std::nullopt;
}

Order MarketSession::submit(int step, ParticipantId owner, Side side, OrderKind kind, Ticks price,
                            Shares qty, std::vector<Trade>* subject_fills,
                            TicketOutcome* outcome) {
  Order order;
  order.id = next_order_id_++;
  order.owner = owner;
  order.side = side;
  order.kind = kind;
  order.price = kind == OrderKind::market ? 0 : price;
  order.quantity = qty;

  auto res = book_.submit(order);
  LoggedOrder entry{step, LogAction::submit, res.order, res.status,
                    std::string(res.reject_reason)};
  if (owner != kSubjectId && config_.flow.order_lifetime > 0 && res.resting_quantity > 0) {
    expiries_.push_back({step + config_.flow.order_lifetime, res.order});
  }
  for (const auto& t : res.fills) {
    accounts_.apply(t);
    trades_.push_back(t);
    last_trade_ = t.price;
    if (subject_fills != nullptr && (t.buyer == kSubjectId || t.seller == kSubjectId)) {
      subject_fills->push_back(t);
    }
  }
  if (outcome != nullptr) {
    outcome->order = res.order;
    outcome->status = res.status;
    outcome->reject_reason = entry.reject_reason;
  }
  log_.push_back(std::move(entry));
  return res.order;
}

StepReport MarketSession::advance(std::span<const OrderTicket> tickets) {
  if (finished()) {
    throw std::logic_error("MarketSession::advance: session already finished");
  }
  StepReport report;
  report.step = step_;
  while (!expiries_.empty() && expiries_.front().step <= step_) {
    Order o = expiries_.front().order;
    expiries_.pop_front();
    o.quantity = book_.cancel(o.side, o.price, o.id);
    if (o.quantity > 0) {
      log_.push_back({step_, LogAction::cancel, o, SubmitStatus::rested, {}});
    }
  }
  for (const auto& ticket : tickets) {
    TicketOutcome outcome;
    if (auto reason = check_ticket(ticket)) {
      Order rejected;
      rejected.id = next_order_id_++;
      rejected.owner = kSubjectId;
      rejected.side = ticket.side;
      rejected.kind = ticket.kind;
      rejected.price = ticket.price;
      rejected.quantity = ticket.quantity;
      outcome = {rejected, SubmitStatus::rejected, *reason};
      log_.push_back({step_, LogAction::submit, rejected, SubmitStatus::rejected, *reason});
    } else {
      submit(step_, kSubjectId, ticket.side, ticket.kind, ticket.price, ticket.quantity,
             &report.subject_fills, &outcome);
    }
    report.tickets.push_back(std::move(outcome));
  }
  while (flow_cursor_ < flow_.size() && flow_[flow_cursor_].step == step_) {
    const auto& e = flow_[flow_cursor_++];
    submit(step_, e.owner, e.side, e.kind, e.price, e.quantity, &report.subject_fills, nullptr);
  }
  ++step_;
  return report;
}

Ticks MarketSession::closing_price() const {
  const auto bid = book_.best_bid();
  const auto ask = book_.best_ask();
  if (bid && ask) {
    return (*bid + *ask) / 2;
  }
  if (last_trade_) {
    return *last_trade_;
  }
  return fundamental_.values.back();
}

SessionResult MarketSession::result() const {
  SessionResult r;
  r.seed = seed_;
  r.orders = log_;
  r.trades = trades_;
  r.openings = openings_;
  r.accounts = accounts_.all();
  r.closing_price = closing_price();
  r.subject_net_profit = mark_to_market(accounts_.at(kSubjectId), r.closing_price);
  return r;
}

SessionResult run_session(const MarketConfig& config, Controller& controller, std::uint64_t seed) {
  MarketSession session(config, seed);
  std::vector<OrderTicket> tickets;
  while (!session.finished()) {
    tickets.clear();
    controller.decide(session.view(), tickets);
    session.advance(tickets);
  }
  return session.result();
}

ReplayResult replay(const SessionResult& session, Ticks tick_size) {
  OrderBook book(tick_size);
  ReplayResult out;
  for (const auto& entry : session.orders) {
    if (entry.status == SubmitStatus::rejected) {
      continue;
    }
    if (entry.action == LogAction::cancel) {
      book.cancel(entry.order.side, entry.order.price, entry.order.id);
      continue;
    }
    auto res = book.submit(entry.order);
    out.trades.insert(out.trades.end(), res.fills.begin(), res.fills.end());
  }
  out.accounts = AccountBook::replay(session.openings, out.trades).all();
  return out;
}

void write_trade_log(std::ostream& out, std::span<const Trade> trades) {
  out << "seq,price_ticks,quantity,buyer_id,seller_id\n";
  for (const auto& t : trades) {
    out << t.seq << ',' << t.price << ',' << t.quantity << ',' << t.buyer << ',' << t.seller
        << '\n';
  }
}

}  // namespace tokenlab::market
