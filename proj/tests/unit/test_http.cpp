#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "support.hpp"
#include "tokenlab/server/http_server.hpp"

using namespace tokenlab;
using namespace tokenlab::server;

namespace {

struct Fixture {
  testsupport::TempDir dir{"http"};
  SessionManager manager;
  HttpServer server;
  int port = -1;
  std::thread thread;

  explicit Fixture(int interval_ms = 1000)
      : manager(
            [&] {
              auto c = harness::load_config(testsupport::default_config_path());
              c.server.step_interval_ms = interval_ms;
              return c;
            }(),
            dir / "sessions.csv"),
        server(manager) {
    port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen(); });
  }
  ~Fixture() {
    server.stop();
    thread.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(10, 0);
    return c;
  }
};

json post(httplib::Client& c, const std::string& path, const json& body, int expect) {
  auto r = c.Post(path, body.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == expect);
  return json::parse(r->body);
}

json get(httplib::Client& c, const std::string& path, int expect = 200) {
  auto r = c.Get(path);
  REQUIRE(r);
  CHECK(r->status == expect);
  return json::parse(r->body);
}

}  // namespace

TEST_CASE("health and schema") {
  Fixture f;
  auto c = f.client();
  const auto h = get(c, "/health");
  CHECK(h["status"] == "ok");
  CHECK(h["protocol"] == kProtocolVersion);
  CHECK(get(c, "/schema") == protocol_schema());
}

TEST_CASE("fast-forward session over HTTP") {
  Fixture f;
  auto c = f.client();
  const auto created = post(c, "/sessions", {{"token_id", "T1"}, {"seed", 9}, {"fast_forward", true}}, 201);
  const std::string base = "/sessions/" + std::to_string(created["session_id"].get<int>());
  CHECK(created["state"] == "lobby");

  CHECK(post(c, base + "/orders", {{"side", "buy"}, {"qty", 1}}, 200)["reason"] == "not-started");
  CHECK(post(c, base + "/start", json::object(), 200)["state"] == "running");
  CHECK(post(c, base + "/start", json::object(), 409)["reason"] == "not-in-lobby");
  CHECK(post(c, base + "/finalize", json::object(), 409)["reason"] == "clock-running");

  CHECK(post(c, base + "/orders", {{"side", "buy"}, {"qty", 5}}, 200)["type"] == "order_queued");
  auto bad = c.Post(base + "/orders", "{oops", "application/json");
  REQUIRE(bad);
  CHECK(json::parse(bad->body)["reason"] == "body");

  CHECK(post(c, base + "/advance", {{"steps", 10}}, 200)["advanced"] == 10);
  CHECK(post(c, base + "/advance", {{"steps", 0}}, 400)["reason"] == "bad-request");
  CHECK(post(c, base + "/advance", {{"steps", "many"}}, 400)["reason"] == "bad-request");
  CHECK(post(c, base + "/advance", {{"steps", 10000}}, 200)["state"] == "closed");
  CHECK(post(c, base + "/advance", {{"steps", 1}}, 409)["reason"] == "not-running");

  const auto record = post(c, base + "/finalize", json::object(), 200);
  CHECK(record["record_id"] == 1);
  CHECK(record["token_label"] == "T1");

  const auto ms = get(c, base + "/messages?after=0");
  CHECK(ms.front()["type"] == "token_artifact");
  CHECK(ms.back()["type"] == "session_end");
  CHECK(get(c, base + "/messages?after=" + std::to_string(ms.size())).empty());

  // The stream replays everything and closes after session_end.
  auto r = c.Get(base + "/stream?after=0");
  REQUIRE(r);
  CHECK(r->get_header_value("Content-Type") == "application/x-tokenlab-frames");
  FrameReader reader;
  reader.feed(r->body);
  std::vector<json> streamed;
  while (auto m = reader.next()) streamed.push_back(*m);
  CHECK(json(streamed) == ms);
}

TEST_CASE("errors") {
  Fixture f;
  auto c = f.client();
  CHECK(get(c, "/sessions/99", 404)["reason"] == "unknown-session");
  CHECK(post(c, "/sessions", {{"token_id", "T9"}}, 400)["reason"] == "unknown-token");
  CHECK(post(c, "/sessions", json::object(), 400)["reason"] == "bad-request");
  CHECK(post(c, "/sessions", {{"token_id", "T1"}, {"seed", -3}}, 400)["reason"] == "bad-request");
  CHECK(post(c, "/sessions", {{"token_id", "T1"}, {"fast_forward", "yes"}}, 400)["reason"] ==
        "bad-request");
  const auto wall = post(c, "/sessions", {{"token_id", "T2"}}, 201);
  const std::string base = "/sessions/" + std::to_string(wall["session_id"].get<int>());
  CHECK(post(c, base + "/advance", {{"steps", 1}}, 409)["reason"] == "not-fast-forward");
  CHECK(get(c, "/sessions/99999999999999999999999", 404)["reason"] == "unknown-session");
}

TEST_CASE("wall-clock session streams live to the end") {
  Fixture f(1);
  auto c = f.client();
  const auto created = post(c, "/sessions", {{"token_id", "T3"}, {"seed", 2}}, 201);
  const std::string base = "/sessions/" + std::to_string(created["session_id"].get<int>());
  post(c, base + "/start", json::object(), 200);

  FrameReader reader;
  std::vector<json> got;
  auto r = c.Get(base + "/stream", [&](const char* data, std::size_t n) {
    reader.feed(std::string_view(data, n));
    while (auto m = reader.next()) got.push_back(*m);
    return true;
  });
  REQUIRE(r);
  REQUIRE_FALSE(got.empty());
  CHECK(got.back()["type"] == "session_end");
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i]["seq"] == i + 1);
  CHECK(post(c, base + "/finalize", json::object(), 200)["token_label"] == "T3");
}
