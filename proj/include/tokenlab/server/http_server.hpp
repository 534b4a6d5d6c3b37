#pragma once

#include <memory>
#include <string>

#include "tokenlab/server/session_manager.hpp"

namespace tokenlab::server {

/// HTTP front end for a SessionManager.
///
///   GET  /health
///   GET  /schema
///   POST /sessions                  {token_id, seed?, fast_forward?}
///   GET  /sessions/{id}
///   POST /sessions/{id}/start
///   POST /sessions/{id}/orders      {side, kind?, qty, price?}
///   POST /sessions/{id}/advance     {steps}        fast-forward sessions only
///   POST /sessions/{id}/finalize
///   GET  /sessions/{id}/messages?after=N           JSON array
///   GET  /sessions/{id}/stream?after=N             chunked frames until session_end
///
/// Errors are error messages with a 4xx status.
class HttpServer {
 public:
  explicit HttpServer(SessionManager& manager);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tokenlab::server
