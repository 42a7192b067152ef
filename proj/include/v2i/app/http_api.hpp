// Copyright 2026 The v2i-twin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef V2I_APP_HTTP_API_HPP_
#define V2I_APP_HTTP_API_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include "v2i/app/twin_server.hpp"
#include "v2i/wire/endpoint.hpp"

namespace v2i::app {

// JSON bodies served by the API; field reference in docs/http_api.md.
std::string snapshot_json(const twin::TwinSnapshot& snap, std::uint64_t now_mono_us);
std::string stats_json(const ServerStats& stats);

struct AlertResult {
  int status = 0;  // HTTP status
  std::string body;
};

// Parses an alert request body and queues it on `server`.
AlertResult handle_alert_request(TwinServer& server, const std::string& body);

// HTTP and WebSocket surface of the twin on one TCP port:
//   GET  /api/snapshot   current twin state
//   GET  /api/stats      link quality and counters
//   POST /api/alert      {"severity","override","text"}
//   WS   /ws/snapshots   snapshot pushed every 1/push_hz seconds
class HttpApi {
 public:
  HttpApi(TwinServer& server, wire::Endpoint bind, double push_hz);
  ~HttpApi();
  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  // Binds and starts serving on a background thread. Throws Errc::kIo.
  void start();
  void stop();
  std::uint16_t port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace v2i::app

#endif  // V2I_APP_HTTP_API_HPP_
