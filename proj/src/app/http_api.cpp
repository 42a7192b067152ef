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

#include "v2i/app/http_api.hpp"

#include <spdlog/spdlog.h>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <cmath>
#include <json.hpp>
#include <thread>

#include "v2i/error.hpp"

namespace v2i::app {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::ordered_json;

ordered_json seconds(float s) {
  if (std::isfinite(s)) return s;
  return nullptr;
}

ordered_json point(const geo::WorldPoint& p) { return {{"x", p.x}, {"y", p.y}, {"z", p.z}}; }

ordered_json link_stats(const std::optional<wire::LinkStats>& s) {
  if (!s) return nullptr;
  return {{"latency_min_ms", s->latency_min_ms}, {"latency_max_ms", s->latency_max_ms},
          {"latency_mean_ms", s->latency_mean_ms}, {"latency_std_ms", s->latency_std_ms},
          {"loss_rate", s->loss_rate},           {"sent_estimate", s->sent_estimate},
          {"received", s->received},             {"clock_skewed", s->clock_skewed}};
}

ordered_json link_json(const wire::LinkMonitor::Snapshot& l) {
  return {{"datagrams", l.datagrams},
          {"decode_failures", l.decode_failures},
          {"out_of_order_dropped", l.out_of_order_dropped},
          {"one_way", link_stats(l.one_way)},
          {"round_trip", link_stats(l.round_trip)}};
}

http::response<http::string_body> make_response(const http::request<http::string_body>& req,
                                                http::status status, std::string body) {
  http::response<http::string_body> res{status, req.version()};
  res.set(http::field::server, "v2i-twin");
  res.set(http::field::content_type, "application/json");
  res.set(http::field::access_control_allow_origin, "*");
  res.set(http::field::access_control_allow_headers, "Content-Type");
  res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
  res.keep_alive(req.keep_alive());
  res.body() = std::move(body);
  res.prepare_payload();
  return res;
}

std::string error_body(const std::string& what) { return ordered_json{{"error", what}}.dump(); }

}  // namespace

std::string snapshot_json(const twin::TwinSnapshot& snap, std::uint64_t now_mono_us) {
  ordered_json ego = {{"connected", snap.ego.connected},
                      {"has_pose", snap.ego.has_pose},
                      {"lat", snap.ego.lat},
                      {"lon", snap.ego.lon},
                      {"world", point(snap.ego.world_pos)},
                      {"yaw_deg", snap.ego.yaw_deg},
                      {"speed_mps", snap.ego.speed_mps},
                      {"overall_state", safety::to_string(snap.ego.overall_state)},
                      {"vehicle_overall_state", safety::to_string(snap.ego.vehicle_overall_state)},
                      {"last_seq", snap.ego.last_seq}};
  auto entities = ordered_json::array();
  for (const auto& e : snap.entities) {
    const std::uint64_t age =
        now_mono_us > e.last_update_us ? (now_mono_us - e.last_update_us) / 1000 : 0;
    entities.push_back({{"id", e.object_id},
                        {"class", scene::to_string(e.object_class)},
                        {"world", point(e.world_pos)},
                        {"rel", {{"x", e.rel_x}, {"y", e.rel_y}, {"z", e.rel_z}}},
                        {"yaw_deg", e.yaw_deg},
                        {"abs_speed_mps", e.abs_speed_mps},
                        {"ttc_s", seconds(e.ttc_s)},
                        {"thw_s", seconds(e.thw_s)},
                        {"ttc", safety::format_metric(e.ttc_s)},
                        {"thw", safety::format_metric(e.thw_s)},
                        {"state", safety::to_string(e.state)},
                        {"vehicle_state", safety::to_string(e.vehicle_state)},
                        {"stale", e.stale},
                        {"age_ms", age}});
  }
  ordered_json j = {{"type", "snapshot"},
                    {"telemetry_applied", snap.telemetry_applied},
                    {"ego", std::move(ego)},
                    {"entities", std::move(entities)},
                    {"link", link_json(snap.ego.link)}};
  return j.dump();
}

std::string stats_json(const ServerStats& st) {
  ordered_json j = {{"connected", st.connected},
                    {"vehicle", st.vehicle ? ordered_json(st.vehicle->to_string()) : ordered_json()},
                    {"telemetry_applied", st.telemetry_applied},
                    {"entities", st.entities},
                    {"rtt_ms", st.rtt_ms ? ordered_json(*st.rtt_ms) : ordered_json()},
                    {"alerts", {{"pending", st.alerts_pending},
                                {"dropped", st.alerts_dropped},
                                {"sent", st.alerts_sent}}},
                    {"link", link_json(st.link)}};
  return j.dump();
}

AlertResult handle_alert_request(TwinServer& server, const std::string& body) {
  ordered_json j;
  try {
    j = ordered_json::parse(body);
  } catch (const ordered_json::exception&) {
    return {400, error_body("body must be JSON")};
  }
  if (!j.is_object() || !j.contains("severity") || !j.contains("text") ||
      !j.at("severity").is_string() || !j.at("text").is_string() ||
      (j.contains("override") && !j.at("override").is_string())) {
    return {400, error_body("expected {\"severity\": string, \"override\": string, \"text\": string}")};
  }
  const auto severity = wire::severity_from_string(j.at("severity").get<std::string>());
  if (!severity) return {400, error_body("severity must be Info, Warning or Recall")};
  const auto ovr = wire::state_override_from_string(j.value("override", std::string("none")));
  if (!ovr) return {400, error_body("override must be none, Safe, Hazardous or Dangerous")};
  try {
    const auto msg = server.submit_alert(*severity, *ovr, j.at("text").get<std::string>());
    return {202, ordered_json{{"queued", true}, {"seq", msg.header.seq}}.dump()};
  } catch (const Error& e) {
    return {400, error_body(e.what())};
  }
}

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, TwinServer& server, std::chrono::milliseconds period)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), server_(server), period_(period) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->push();
      self->read();
    });
  }

 private:
  // Client frames are ignored; the read only detects close.
  void read() {
    ws_.async_read(in_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->timer_.cancel();
        return;
      }
      self->in_.consume(self->in_.size());
      self->read();
    });
  }

  void push() {
    out_ = snapshot_json(server_.snapshot(), monotonic_us());
    ws_.text(true);
    ws_.async_write(net::buffer(out_), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return;
      self->timer_.expires_after(self->period_);
      self->timer_.async_wait([self](beast::error_code wec) {
        if (!wec) self->push();
      });
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  TwinServer& server_;
  std::chrono::milliseconds period_;
  beast::flat_buffer in_;
  std::string out_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, TwinServer& server, std::chrono::milliseconds push_period)
      : stream_(std::move(socket)), server_(server), push_period_(push_period) {}

  void read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buf_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       self->on_read(ec);
                     });
  }

 private:
  void on_read(beast::error_code ec) {
    if (ec) {
      beast::error_code ignored;
      stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
      return;
    }
    const std::string path(req_.target().substr(0, req_.target().find('?')));
    if (websocket::is_upgrade(req_) && path == "/ws/snapshots") {
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), server_, push_period_)
          ->run(std::move(req_));
      return;
    }
    res_ = std::make_shared<http::response<http::string_body>>(route(path));
    http::async_write(stream_, *res_, [self = shared_from_this()](beast::error_code wec, std::size_t) {
      if (wec) return;
      if (!self->res_->keep_alive()) {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        return;
      }
      self->read();
    });
  }

  http::response<http::string_body> route(const std::string& path) {
    const auto method = req_.method();
    if (method == http::verb::options) return make_response(req_, http::status::no_content, "");
    if (path == "/api/snapshot") {
      if (method != http::verb::get) return make_response(req_, http::status::method_not_allowed, error_body("use GET"));
      return make_response(req_, http::status::ok, snapshot_json(server_.snapshot(), monotonic_us()));
    }
    if (path == "/api/stats") {
      if (method != http::verb::get) return make_response(req_, http::status::method_not_allowed, error_body("use GET"));
      return make_response(req_, http::status::ok, stats_json(server_.stats()));
    }
    if (path == "/api/alert") {
      if (method != http::verb::post) return make_response(req_, http::status::method_not_allowed, error_body("use POST"));
      auto r = handle_alert_request(server_, req_.body());
      return make_response(req_, static_cast<http::status>(r.status), std::move(r.body));
    }
    return make_response(req_, http::status::not_found, error_body("no such resource"));
  }

  beast::tcp_stream stream_;
  TwinServer& server_;
  std::chrono::milliseconds push_period_;
  beast::flat_buffer buf_;
  http::request<http::string_body> req_;
  std::shared_ptr<http::response<http::string_body>> res_;
};

}  // namespace

struct HttpApi::Impl {
  Impl(TwinServer& s, wire::Endpoint b, double hz)
      : server(s),
        bind(std::move(b)),
        push_period(std::max<std::int64_t>(1, std::llround(1000.0 / hz))),
        acceptor(ioc) {}

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (!acceptor.is_open()) return;
      if (!ec) std::make_shared<HttpSession>(std::move(socket), server, push_period)->read();
      accept();
    });
  }

  TwinServer& server;
  wire::Endpoint bind;
  std::chrono::milliseconds push_period;
  net::io_context ioc{1};
  tcp::acceptor acceptor;
  std::thread thread;
};

HttpApi::HttpApi(TwinServer& server, wire::Endpoint bind, double push_hz)
    : impl_(std::make_unique<Impl>(server, std::move(bind), push_hz)) {}

HttpApi::~HttpApi() { stop(); }

void HttpApi::start() {
  try {
    net::ip::tcp::resolver resolver(impl_->ioc);
    const std::string host = impl_->bind.host.empty() ? "0.0.0.0" : impl_->bind.host;
    const auto ep = *resolver.resolve(host, std::to_string(impl_->bind.port)).begin();
    impl_->acceptor.open(ep.endpoint().protocol());
    impl_->acceptor.set_option(net::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep.endpoint());
    impl_->acceptor.listen(net::socket_base::max_listen_connections);
  } catch (const boost::system::system_error& e) {
    throw Error(Errc::kIo, "http bind " + impl_->bind.to_string() + ": " + e.what());
  }
  impl_->accept();
  impl_->thread = std::thread([this] { impl_->ioc.run(); });
  spdlog::info("http api on {}:{}", impl_->bind.host, port());
}

void HttpApi::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  net::post(impl_->ioc, [this] {
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
  });
  impl_->ioc.stop();
  impl_->thread.join();
}

std::uint16_t HttpApi::port() const {
  beast::error_code ec;
  const auto ep = impl_->acceptor.local_endpoint(ec);
  return ec ? impl_->bind.port : ep.port();
}

}  // namespace v2i::app
