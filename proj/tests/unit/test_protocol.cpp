#include <doctest.h>

#include "schema_check.hpp"
#include "tokenlab/server/protocol.hpp"

using namespace tokenlab;
using namespace tokenlab::server;

TEST_CASE("frames round trip in arbitrary chunks") {
  std::vector<json> sent;
  std::string wire;
  for (int i = 0; i < 30; ++i) {
    json m = msg::clock_tick(i, 390);
    m["seq"] = i + 1;
    m["note"] = std::string(static_cast<std::size_t>(i * 7), 'x');
    sent.push_back(m);
    wire += frame(m);
  }
  for (std::size_t chunk : {1u, 3u, 17u, 4096u}) {
    FrameReader reader;
    std::vector<json> got;
    for (std::size_t pos = 0; pos < wire.size(); pos += chunk) {
      reader.feed(std::string_view(wire).substr(pos, chunk));
      while (auto m = reader.next()) got.push_back(*m);
    }
    CHECK(got == sent);
  }
}

TEST_CASE("frame layout") {
  const json m = {{"a", 1}};
  CHECK(frame(m) == "7\n{\"a\":1}");
}

TEST_CASE("bad length prefixes throw") {
  FrameReader a;
  a.feed("abc\n{}");
  CHECK_THROWS_AS((void)a.next(), std::runtime_error);
  FrameReader b;
  b.feed(std::string(30, '1'));
  CHECK_THROWS_AS((void)b.next(), std::runtime_error);
  FrameReader c;
  c.feed("\n{}");
  CHECK_THROWS_AS((void)c.next(), std::runtime_error);
  FrameReader d;
  d.feed("12");
  CHECK_FALSE(d.next());
}

TEST_CASE("ticket parsing") {
  using T = market::OrderTicket;
  auto ok = [](const json& body) { return std::get<T>(parse_ticket(body)); };
  auto reason = [](const json& body) { return std::get<std::string>(parse_ticket(body)); };

  CHECK(ok({{"side", "buy"}, {"qty", 5}}) == T{market::Side::buy, market::OrderKind::market, 5, 0});
  CHECK(ok({{"side", "sell"}, {"kind", "limit"}, {"qty", 2}, {"price", 10010}, {"x", 1}}) ==
        T{market::Side::sell, market::OrderKind::limit, 2, 10010});
  CHECK(reason(json::array()) == "body");
  CHECK(reason({{"qty", 5}}) == "side");
  CHECK(reason({{"side", "hold"}, {"qty", 5}}) == "side");
  CHECK(reason({{"side", "buy"}, {"kind", "stop"}, {"qty", 5}}) == "kind");
  CHECK(reason({{"side", "buy"}, {"qty", 0}}) == "quantity");
  CHECK(reason({{"side", "buy"}, {"qty", 1.5}}) == "quantity");
  CHECK(reason({{"side", "buy"}, {"kind", "limit"}, {"qty", 1}}) == "price");
  CHECK(reason({{"side", "buy"}, {"kind", "limit"}, {"qty", 1}, {"price", 0}}) == "price");
}

TEST_CASE("every message builder satisfies the schema") {
  const auto& schema = protocol_schema();
  CHECK(schema["$schema"] == "https://json-schema.org/draft/2020-12/schema");

  market::OrderBook book(1);
  market::Order bid{1, 100, market::Side::buy, market::OrderKind::limit, 9990, 10, 0};
  (void)book.submit(bid);
  tokens::InformationToken token;
  token.id = "T7";
  const market::Trade trade{10000, 3, 1, 2, 5, 1, 100, market::Side::buy};

  const std::vector<json> messages{
      msg::token_artifact(token),
      msg::book_snapshot(book, std::nullopt, 5, 0),
      msg::book_snapshot(book, market::Ticks{10001}, 5, 3),
      msg::clock_tick(1, 390),
      msg::order_accepted(1, bid, market::SubmitStatus::rested),
      msg::order_rejected(2, "quantity"),
      msg::fill(1, trade, market::Side::buy),
      msg::session_end(-42.0, 10300),
      msg::error("unknown-session"),
      msg::error("bad-request", "detail"),
  };
  for (const auto& m : messages) {
    CAPTURE(m.dump());
    CHECK(m["v"] == kProtocolVersion);
    CHECK(testsupport::check_message(schema, m).empty());
  }
  json broken = msg::clock_tick(1, 2);
  broken.erase("steps");
  CHECK_FALSE(testsupport::check_message(schema, broken).empty());
}
