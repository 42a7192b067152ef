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
#include <iostream>
#include <memory>

#include "v2i/app/config.hpp"
#include "v2i/app/http_api.hpp"
#include "v2i/app/process.hpp"
#include "v2i/app/twin_server.hpp"
#include "v2i/app/vehicle_agent.hpp"
#include "v2i/error.hpp"
#include "v2i/scene/scenario.hpp"
#include "v2i/scene/scene_log.hpp"
#include "v2i/wire/channel.hpp"

namespace {

using namespace v2i;

struct Options {
  std::string source;
  std::string twin;
  std::string config;
  std::string channel;
  std::string report;
  std::string bind;
  std::string http;
  bool loopback = false;
  bool realtime = false;
  bool quiet = false;
  bool color = false;
  int linger_ms = -1;
};

void print_summary(const app::AgentSummary& s) {
  std::cout << fmt::format(
      "summary: frames {} telemetry {} mean {:.3f} ms max {:.3f} ms | safe {} hazardous {} "
      "dangerous {} | operator messages {} malformed downlink {}{}\n",
      s.frames, s.telemetry_sent, s.mean_frame_ms, s.max_frame_ms, s.state_frames[0],
      s.state_frames[1], s.state_frames[2], s.operator_messages, s.downlink_malformed,
      s.collision_with ? fmt::format(" | collision with #{}", *s.collision_with) : "");
}

void print_twin_summary(const app::TwinServer& server) {
  const auto st = server.stats();
  std::cout << fmt::format("twin: telemetry applied {} entities {} decode failures {}",
                           st.telemetry_applied, st.entities, st.link.decode_failures);
  if (st.link.one_way) {
    const auto& l = *st.link.one_way;
    std::cout << fmt::format(
        " | latency min {:.3f} max {:.3f} mean {:.3f} std {:.3f} ms loss {:.3f}%", l.latency_min_ms,
        l.latency_max_ms, l.latency_mean_ms, l.latency_std_ms, 100.0 * l.loss_rate);
  }
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  v2i::app::init_logging();
  Options opt;
  CLI::App cli{"Vehicle agent: tracks objects, shows safety state, streams telemetry to the twin"};
  cli.add_option("--source", opt.source, "log:<path> or scenario:<path>");
  cli.add_option("--twin", opt.twin, "twin address host:port");
  cli.add_option("--config", opt.config, "JSON config file")->check(CLI::ExistingFile);
  cli.add_flag("--loopback", opt.loopback, "run an in-process twin over a simulated channel");
  cli.add_option("--channel", opt.channel, "loopback channel: lossless, cellular[:seed] or key=value list");
  cli.add_option("--report", opt.report, "write the per-frame JSONL report log here");
  cli.add_option("--bind", opt.bind, "local UDP address host:port");
  cli.add_option("--http", opt.http, "loopback mode: serve the twin API on host:port");
  cli.add_option("--linger-ms", opt.linger_ms, "keep the downlink open after the last frame");
  cli.add_flag("--realtime", opt.realtime, "pace frames by their timestamps");
  cli.add_flag("--color", opt.color, "ANSI colours on the dashboard");
  cli.add_flag("--quiet", opt.quiet, "no dashboard lines");
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? app::kExitOk : app::kExitConfig;
  }

  app::AgentConfig cfg;
  app::ServerConfig server_cfg;
  std::unique_ptr<scene::FrameSource> source;
  try {
    if (!opt.config.empty()) {
      cfg = app::load_agent_config(opt.config);
      server_cfg = app::load_server_config(opt.config);
    }
    if (!opt.source.empty()) cfg.source = app::SourceSpec::parse(opt.source);
    if (!opt.twin.empty()) cfg.twin = wire::Endpoint::parse(opt.twin);
    if (!opt.bind.empty()) cfg.bind = wire::Endpoint::parse(opt.bind);
    if (!opt.channel.empty()) cfg.channel = opt.channel;
    if (!opt.report.empty()) cfg.report_log = opt.report;
    if (opt.loopback) cfg.loopback = true;
    if (opt.realtime) cfg.realtime = true;
    if (opt.color) cfg.color = true;
    if (opt.quiet) cfg.dashboard = false;
    if (opt.linger_ms >= 0) cfg.linger = std::chrono::milliseconds(opt.linger_ms);
    cfg.validate();
    if (!cfg.source) throw Error(Errc::kConfig, "--source is required");

    if (cfg.source->kind == app::SourceKind::kLog) {
      source = std::make_unique<scene::SceneLogReader>(cfg.source->path, cfg.intrinsics);
    } else {
      const auto spec = scene::load_scenario_spec(cfg.source->path);
      server_cfg.twin.origin = spec.origin;
      source = std::make_unique<scene::ScenarioGenerator>(spec, cfg.intrinsics);
    }
    (void)wire::ChannelModel::parse(cfg.channel);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return app::kExitConfig;
  }

  const auto& stop = app::install_stop_handlers();
  try {
    std::unique_ptr<wire::DatagramSocket> socket;
    std::unique_ptr<app::TwinServer> twin;
    std::unique_ptr<app::HttpApi> http;
    if (cfg.loopback) {
      auto net = wire::LoopbackNetwork::create();
      const wire::Endpoint vehicle_ep{"vehicle", 1};
      auto uplink = wire::ChannelModel::parse(cfg.channel);
      auto downlink = uplink;
      downlink.seed = uplink.seed + 1;
      net->set_channel(vehicle_ep, cfg.twin, uplink);
      net->set_channel(cfg.twin, vehicle_ep, downlink);
      server_cfg.stats_period = std::chrono::milliseconds(0);
      twin = std::make_unique<app::TwinServer>(server_cfg, net->bind(cfg.twin));
      twin->start();
      if (!opt.http.empty()) {
        http = std::make_unique<app::HttpApi>(*twin, wire::Endpoint::parse(opt.http), server_cfg.push_hz);
        http->start();
      }
      socket = net->bind(vehicle_ep);
    } else {
      socket = std::make_unique<wire::UdpSocket>(cfg.bind);
    }

    app::VehicleAgent agent(cfg, std::move(source), std::move(socket), &std::cout);
    const auto summary = agent.run(stop);
    print_summary(summary);
    if (twin) {
      // Let in-flight datagrams land before reading the twin's view.
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
      print_twin_summary(*twin);
      if (http) http->stop();
      twin->stop();
    }
    std::cout.flush();
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return app::kExitRuntime;
  }
  return app::kExitOk;
}
