#include "tokenlab/server/protocol.hpp"

#include <charconv>
#include <stdexcept>

namespace tokenlab::server {

namespace msg {

namespace {

json base(std::string_view type) { return json{{"type", type}, {"v", kProtocolVersion}}; }

json levels_json(const std::vector<market::LevelView>& levels) {
  json out = json::array();
  for (const auto& l : levels) {
    out.push_back({{"price", l.price}, {"qty", l.quantity}, {"orders", l.orders}});
  }
  return out;
}

}  // namespace

json token_artifact(const tokens::InformationToken& token) {
  json m = base("token_artifact");
  m["token_id"] = token.id;
  m["artifact"] = token.artifact_text;
  return m;
}

json book_snapshot(const market::OrderBook& book, std::optional<market::Ticks> last_trade,
                   std::size_t levels, int step) {
  json m = base("book_snapshot");
  m["step"] = step;
  m["bids"] = levels_json(book.depth(market::Side::buy, levels));
  m["asks"] = levels_json(book.depth(market::Side::sell, levels));
  m["last_trade"] = last_trade ? json(*last_trade) : json(nullptr);
  return m;
}

json clock_tick(int step, int steps) {
  json m = base("clock_tick");
  m["step"] = step;
  m["steps"] = steps;
  return m;
}

json order_accepted(std::uint64_t order_ref, const market::Order& order,
                    market::SubmitStatus status) {
  json m = base("order_accepted");
  m["order_ref"] = order_ref;
  m["order_id"] = order.id;
  m["side"] = market::to_string(order.side);
  m["kind"] = market::to_string(order.kind);
  m["qty"] = order.quantity;
  m["price"] = order.price;
  m["status"] = market::to_string(status);
  return m;
}

json order_rejected(std::uint64_t order_ref, std::string_view reason) {
  json m = base("order_rejected");
  m["order_ref"] = order_ref;
  m["reason"] = reason;
  return m;
}

json fill(std::uint64_t order_ref, const market::Trade& trade, market::Side side) {
  json m = base("fill");
  m["order_ref"] = order_ref;
  m["price"] = trade.price;
  m["qty"] = trade.quantity;
  m["side"] = market::to_string(side);
  m["trade_seq"] = trade.seq;
  return m;
}

json session_end(double net_profit, market::Ticks closing_price) {
  json m = base("session_end");
  m["net_profit"] = net_profit;
  m["closing_price"] = closing_price;
  return m;
}

json error(std::string_view reason, std::string_view detail) {
  json m = base("error");
  m["reason"] = reason;
  if (!detail.empty()) m["detail"] = detail;
  return m;
}

}  // namespace msg

std::string frame(const json& message) {
  const std::string body = message.dump();
  return std::to_string(body.size()) + '\n' + body;
}

void FrameReader::feed(std::string_view bytes) { buffer_.append(bytes); }

std::optional<json> FrameReader::next() {
  const auto nl = buffer_.find('\n');
  if (nl == std::string::npos) {
    if (buffer_.size() > 20) throw std::runtime_error("frame: length prefix too long");
    return std::nullopt;
  }
  std::size_t len = 0;
  auto [ptr, ec] = std::from_chars(buffer_.data(), buffer_.data() + nl, len);
  if (ec != std::errc() || ptr != buffer_.data() + nl || nl == 0) {
    throw std::runtime_error("frame: bad length prefix");
  }
  if (buffer_.size() < nl + 1 + len) return std::nullopt;
  json out = json::parse(buffer_.substr(nl + 1, len));
  buffer_.erase(0, nl + 1 + len);
  return out;
}

std::variant<market::OrderTicket, std::string> parse_ticket(const json& body) {
  if (!body.is_object()) return std::string("body");
  market::OrderTicket t;

  auto side_it = body.find("side");
  if (side_it == body.end() || !side_it->is_string()) return std::string("side");
  auto side = market::parse_side(side_it->get<std::string>());
  if (!side) return std::string("side");
  t.side = *side;

  if (auto it = body.find("kind"); it != body.end()) {
    if (!it->is_string()) return std::string("kind");
    auto kind = market::parse_kind(it->get<std::string>());
    if (!kind) return std::string("kind");
    t.kind = *kind;
  }

  auto qty_it = body.find("qty");
  if (qty_it == body.end() || !qty_it->is_number_integer()) return std::string("quantity");
  t.quantity = qty_it->get<market::Shares>();
  if (t.quantity <= 0) return std::string("quantity");

  if (t.kind == market::OrderKind::limit) {
    auto price_it = body.find("price");
    if (price_it == body.end() || !price_it->is_number_integer()) return std::string("price");
    t.price = price_it->get<market::Ticks>();
    if (t.price <= 0) return std::string("price");
  }
  return t;
}

const json& protocol_schema() {
  static const json schema = [] {
    auto typed = [](std::string_view type, json props, json required) {
      props["type"] = {{"const", type}};
      props["v"] = {{"const", kProtocolVersion}};
      props["seq"] = {{"type", "integer"}, {"minimum", 1}};
      required.push_back("type");
      required.push_back("v");
      return json{{"type", "object"}, {"properties", props}, {"required", required}};
    };
    const json integer = {{"type", "integer"}};
    const json side = {{"enum", {"buy", "sell"}}};
    const json level = {{"type", "object"},
                        {"properties", {{"price", integer}, {"qty", integer}, {"orders", integer}}},
                        {"required", {"price", "qty", "orders"}}};
    const json levels = {{"type", "array"}, {"items", level}};

    json defs;
    defs["token_artifact"] = typed(
        "token_artifact", {{"token_id", {{"type", "string"}}}, {"artifact", {{"type", "string"}}}},
        {"token_id", "artifact"});
    defs["book_snapshot"] =
        typed("book_snapshot",
              {{"step", integer},
               {"bids", levels},
               {"asks", levels},
               {"last_trade", {{"type", {"integer", "null"}}}}},
              {"step", "bids", "asks", "last_trade"});
    defs["clock_tick"] =
        typed("clock_tick", {{"step", integer}, {"steps", integer}}, {"step", "steps"});
    defs["order_accepted"] = typed("order_accepted",
                                   {{"order_ref", integer},
                                    {"order_id", integer},
                                    {"side", side},
                                    {"kind", {{"enum", {"market", "limit"}}}},
                                    {"qty", integer},
                                    {"price", integer},
                                    {"status", {{"type", "string"}}}},
                                   {"order_ref", "order_id", "side", "kind", "qty", "status"});
    defs["order_rejected"] =
        typed("order_rejected", {{"order_ref", integer}, {"reason", {{"type", "string"}}}},
              {"order_ref", "reason"});
    defs["fill"] = typed("fill",
                         {{"order_ref", integer},
                          {"price", integer},
                          {"qty", integer},
                          {"side", side},
                          {"trade_seq", integer}},
                         {"order_ref", "price", "qty", "side"});
    defs["session_end"] =
        typed("session_end", {{"net_profit", {{"type", "number"}}}, {"closing_price", integer}},
              {"net_profit"});
    defs["error"] = typed(
        "error", {{"reason", {{"type", "string"}}}, {"detail", {{"type", "string"}}}}, {"reason"});

    // HTTP acknowledgement of a queued order; not part of the message stream.
    defs["order_queued"] = typed("order_queued", {{"order_ref", integer}}, {"order_ref"});

    defs["create_session_request"] = {
        {"type", "object"},
        {"properties",
         {{"token_id", {{"type", "string"}, {"pattern", "^T[1-7]$"}}},
          {"seed", {{"type", "integer"}, {"minimum", 0}}},
          {"fast_forward", {{"type", "boolean"}}}}},
        {"required", {"token_id"}}};
    defs["order_request"] = {{"type", "object"},
                             {"properties",
                              {{"side", side},
                               {"kind", {{"enum", {"market", "limit"}}}},
                               {"qty", {{"type", "integer"}, {"minimum", 1}}},
                               {"price", {{"type", "integer"}, {"minimum", 1}}}}},
                             {"required", {"side", "qty"}}};

    json any = json::array();
    for (const char* name : {"token_artifact", "book_snapshot", "clock_tick", "order_accepted",
                             "order_rejected", "fill", "session_end", "error"}) {
      any.push_back({{"$ref", std::string("#/$defs/") + name}});
    }
    return json{{"$schema", "https://json-schema.org/draft/2020-12/schema"},
                {"title", "tokenlab session protocol"},
                {"version", kProtocolVersion},
                {"oneOf", any},
                {"$defs", defs}};
  }();
  return schema;
}

}  // namespace tokenlab::server
