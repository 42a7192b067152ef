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

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <thread>

#include "v2i/app/config.hpp"
#include "v2i/app/http_api.hpp"
#include "v2i/app/process.hpp"
#include "v2i/app/twin_server.hpp"
#include "v2i/error.hpp"

int main(int argc, char** argv) {
  v2i::app::init_logging();
  using namespace v2i;
  std::string listen, http, origin, config;
  bool auto_override = false;
  int stats_ms = -1;
  CLI::App cli{"Digital twin server: telemetry endpoint, entity store, operator API"};
  cli.add_option("--listen", listen, "UDP address host:port");
  cli.add_option("--http", http, "HTTP/WebSocket address host:port");
  cli.add_option("--origin", origin, "geo origin lat,lon");
  cli.add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
  cli.add_option("--stats-ms", stats_ms, "link statistics log period, 0 to disable");
  cli.add_flag("--auto-override", auto_override, "push a Dangerous override when the twin disagrees");
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? app::kExitOk : app::kExitConfig;
  }

  app::ServerConfig cfg;
  try {
    if (!config.empty()) cfg = app::load_server_config(config);
    if (!listen.empty()) cfg.listen = wire::Endpoint::parse(listen);
    if (!http.empty()) cfg.http = wire::Endpoint::parse(http);
    if (!origin.empty()) cfg.twin.origin = app::parse_origin(origin);
    if (stats_ms >= 0) cfg.stats_period = std::chrono::milliseconds(stats_ms);
    if (auto_override) cfg.auto_override = true;
    cfg.validate();
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return app::kExitConfig;
  }

  const auto& stop = app::install_stop_handlers();
  try {
    app::TwinServer server(cfg, std::make_unique<wire::UdpSocket>(cfg.listen));
    app::HttpApi api(server, cfg.http, cfg.push_hz);
    server.start();
    api.start();
    spdlog::info("twin listening on udp {}", server.local_endpoint().to_string());
    while (!stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    spdlog::info("shutting down");
    api.stop();
    server.stop();
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return app::kExitRuntime;
  }
  return app::kExitOk;
}
