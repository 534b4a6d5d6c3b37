#include "tokenlab/server/http_server.hpp"

#include <httplib.h>

#include "tokenlab/harness/experiment.hpp"

namespace tokenlab::server {

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kFrames = "application/x-tokenlab-frames";
constexpr std::size_t kWorkers = 32;

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void fail(httplib::Response& res, int status, std::string_view reason,
          std::string_view detail = {}) {
  reply(res, status, msg::error(reason, detail));
}

/// Parses the request body; an empty body is an empty object.
std::optional<json> body_json(const httplib::Request& req, httplib::Response& res) {
  if (req.body.empty()) return json::object();
  auto doc = json::parse(req.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    fail(res, 400, "bad-request", "body must be a JSON object");
    return std::nullopt;
  }
  return doc;
}

std::uint64_t query_u64(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return 0;
  try {
    return std::stoull(req.get_param_value(key));
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

struct HttpServer::Impl {
  SessionManager& manager;
  httplib::Server http;

  explicit Impl(SessionManager& m) : manager(m) {
    http.new_task_queue = [] { return new httplib::ThreadPool(kWorkers); };
    http.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          try {
            std::rethrow_exception(ep);
          } catch (const json::exception& e) {
            fail(res, 400, "bad-request", e.what());
          } catch (const std::out_of_range&) {
            fail(res, 404, "unknown-session");
          } catch (const std::exception& e) {
            fail(res, 500, "internal", e.what());
          }
        });
    routes();
  }

  std::shared_ptr<LiveSession> session(const httplib::Request& req, httplib::Response& res) {
    auto s = manager.find(std::stoull(req.matches[1]));
    if (!s) fail(res, 404, "unknown-session");
    return s;
  }

  void routes() {
    http.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, 200,
            {{"status", "ok"},
             {"version", harness::library_version()},
             {"protocol", kProtocolVersion},
             {"sessions", manager.size()}});
    });

    http.Get("/schema", [](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, protocol_schema());
    });

    http.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = body_json(req, res);
      if (!body) return;
      auto token = body->find("token_id");
      if (token == body->end() || !token->is_string()) {
        return fail(res, 400, "bad-request", "token_id is required");
      }
      std::optional<std::uint64_t> seed;
      if (auto it = body->find("seed"); it != body->end()) {
        if (!it->is_number_unsigned()) {
          return fail(res, 400, "bad-request", "seed must be a non-negative integer");
        }
        seed = it->get<std::uint64_t>();
      }
      const bool fast = body->value("fast_forward", false);
      try {
        auto s = manager.create(token->get<std::string>(), seed, fast);
        reply(res, 201, s->describe());
      } catch (const ProtocolError& e) {
        fail(res, 400, e.reason(), e.what());
      }
    });

    http.Get(R"(/sessions/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      if (auto s = session(req, res)) reply(res, 200, s->describe());
    });

    http.Post(R"(/sessions/(\d+)/start)",
              [this](const httplib::Request& req, httplib::Response& res) {
                auto s = session(req, res);
                if (!s) return;
                if (!s->start()) return fail(res, 409, "not-in-lobby");
                reply(res, 200, s->describe());
              });

    http.Post(R"(/sessions/(\d+)/orders)",
              [this](const httplib::Request& req, httplib::Response& res) {
                auto s = session(req, res);
                if (!s) return;
                auto body = json::parse(req.body, nullptr, false);
                // Malformed bodies still get an order_rejected so every order
                // attempt has exactly one response.
                reply(res, 200, s->submit(body.is_discarded() ? json() : body));
              });

    http.Post(R"(/sessions/(\d+)/advance)",
              [this](const httplib::Request& req, httplib::Response& res) {
                auto s = session(req, res);
                if (!s) return;
                if (!s->fast_forward()) return fail(res, 409, "not-fast-forward");
                auto body = body_json(req, res);
                if (!body) return;
                const int steps = body->value("steps", 1);
                if (steps < 1) return fail(res, 400, "bad-request", "steps must be >= 1");
                try {
                  const int done = s->advance(steps);
                  json d = s->describe();
                  d["advanced"] = done;
                  reply(res, 200, d);
                } catch (const ProtocolError& e) {
                  fail(res, 409, e.reason(), e.what());
                }
              });

    http.Post(R"(/sessions/(\d+)/finalize)",
              [this](const httplib::Request& req, httplib::Response& res) {
                auto s = session(req, res);
                if (!s) return;
                auto record = s->finalize();
                if (!record) return fail(res, 409, "clock-running");
                reply(res, 200,
                      {{"record_id", record->record_id},
                       {"subject_id", record->subject_id},
                       {"token_label", record->token_label},
                       {"net_profit", record->net_profit},
                       {"seed", record->seed}});
              });

    http.Get(R"(/sessions/(\d+)/messages)",
             [this](const httplib::Request& req, httplib::Response& res) {
               auto s = session(req, res);
               if (!s) return;
               reply(res, 200, json(s->messages_after(query_u64(req, "after"))));
             });

    http.Get(R"(/sessions/(\d+)/stream)",
             [this](const httplib::Request& req, httplib::Response& res) {
               auto s = session(req, res);
               if (!s) return;
               auto cursor = std::make_shared<std::uint64_t>(query_u64(req, "after"));
               res.set_chunked_content_provider(
                   kFrames, [s, cursor](std::size_t, httplib::DataSink& sink) {
                     s->wait_for(*cursor, std::chrono::milliseconds(250));
                     for (const auto& m : s->messages_after(*cursor)) {
                       const auto bytes = frame(m);
                       if (!sink.write(bytes.data(), bytes.size())) return false;
                       *cursor = m.at("seq").get<std::uint64_t>();
                       if (m.at("type") == "session_end") {
                         sink.done();
                         return true;
                       }
                     }
                     return true;
                   });
             });
  }
};

HttpServer::HttpServer(SessionManager& manager) : impl_(std::make_unique<Impl>(manager)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->http.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

}  // namespace tokenlab::server
