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

#include "v2i/app/vehicle_agent.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <thread>

#include "v2i/app/report_log.hpp"
#include "v2i/error.hpp"
#include "v2i/wire/codec.hpp"

namespace v2i::app {

VehicleAgent::VehicleAgent(AgentConfig cfg, std::unique_ptr<scene::FrameSource> source,
                           std::unique_ptr<wire::DatagramSocket> socket, std::ostream* dashboard)
    : cfg_(std::move(cfg)),
      source_(std::move(source)),
      socket_(std::move(socket)),
      dashboard_(dashboard),
      tracker_(cfg_.tracker, cfg_.intrinsics),
      session_(cfg_.session) {}

VehicleAgent::~VehicleAgent() { socket_->close(); }

void VehicleAgent::send(const wire::Message& msg) {
  try {
    socket_->send_to(cfg_.twin, wire::encode(msg));
  } catch (const Error& e) {
    spdlog::warn("uplink send failed: {}", e.what());
  }
}

void VehicleAgent::print(const std::string& line) {
  if (dashboard_ == nullptr) return;
  std::lock_guard lock(print_mu_);
  *dashboard_ << line << '\n';
}

void VehicleAgent::receive_loop() {
  while (receiving_) {
    const auto r = socket_->receive(std::chrono::milliseconds(20));
    const std::uint64_t now = wire::wall_clock_us();
    std::vector<wire::Message> out;
    if (r) {
      ++downlink_received_;
      try {
        const auto msg = wire::decode(r->bytes);
        {
          std::lock_guard lock(session_mu_);
          out = session_.on_message(msg, now);
          if (session_.established()) acknowledged_ = true;
        }
        if (const auto* op = std::get_if<wire::OperatorMessage>(&msg)) {
          ++operator_messages_;
          display_.apply_operator(*op, now);
          print(fmt::format("[operator] {}: {}", wire::to_string(op->severity), op->text));
        }
      } catch (const Error& e) {
        ++downlink_malformed_;
        spdlog::debug("malformed downlink from {}: {}", r->from.to_string(), e.what());
      }
    }
    bool warn = false;
    {
      std::lock_guard lock(session_mu_);
      auto due = session_.poll(now);
      out.insert(out.end(), due.begin(), due.end());
      warn = session_.take_unreachable_warning();
    }
    if (warn) {
      spdlog::warn("twin at {} is not answering; continuing locally and retrying",
                   cfg_.twin.to_string());
    }
    for (const auto& m : out) send(m);
  }
}

AgentSummary VehicleAgent::run(const std::atomic<bool>& stop) {
  std::optional<ReportLogWriter> log;
  if (cfg_.report_log) log.emplace(*cfg_.report_log);

  // Hello goes out before the first telemetry message.
  {
    std::lock_guard lock(session_mu_);
    for (const auto& m : session_.poll(wire::wall_clock_us())) send(m);
  }
  receiving_ = true;
  std::thread receiver([this] { receive_loop(); });

  AgentSummary summary;
  double total_ms = 0.0;
  const auto wall_start = std::chrono::steady_clock::now();
  std::optional<std::uint64_t> first_ts;

  try {
    while (!stop) {
      auto frame = source_->next();
      if (!frame) break;
      if (cfg_.realtime) {
        if (!first_ts) first_ts = frame->timestamp_us;
        std::this_thread::sleep_until(wall_start +
                                      std::chrono::microseconds(frame->timestamp_us - *first_ts));
      }
      const auto t0 = std::chrono::steady_clock::now();
      FrameRecord rec;
      rec.frame_index = frame->frame_index;
      rec.start_us = wire::wall_clock_us();

      const auto report = tracker_.update(*frame);
      display_.set_local(report.overall_state);

      if (summary.frames % cfg_.send_every == 0) {
        std::uint32_t seq = 0;
        {
          std::lock_guard lock(session_mu_);
          seq = session_.next_seq(wire::MessageType::kTelemetry);
        }
        auto msg = make_telemetry(*frame, report, seq, wire::wall_clock_us());
        send(msg);
        rec.seq = seq;
        ++summary.telemetry_sent;
        if (capture_) sent_.push_back(std::move(msg));
      }

      const auto view = display_.view(wire::wall_clock_us());
      ++summary.state_frames[static_cast<std::size_t>(view.effective)];
      if (log) {
        log->write(report, view.effective);
        log->flush();
      }
      if (cfg_.dashboard) print(render_dashboard_line(report, view, cfg_.color));
      if (frame->collision_with) {
        summary.collision_with = frame->collision_with;
        print(fmt::format("[{:>6}] collision with #{}", frame->frame_index, *frame->collision_with));
      }

      rec.processing_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      total_ms += rec.processing_ms;
      summary.max_frame_ms = std::max(summary.max_frame_ms, rec.processing_ms);
      ++summary.frames;
      records_.push_back(rec);
      if (capture_) reports_.push_back(report);
    }

    const auto linger_end = std::chrono::steady_clock::now() + cfg_.linger;
    while (!stop && std::chrono::steady_clock::now() < linger_end) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  } catch (...) {
    receiving_ = false;
    receiver.join();
    throw;
  }

  summary.interrupted = stop;
  receiving_ = false;
  receiver.join();
  if (log) log->flush();

  summary.mean_frame_ms = summary.frames > 0 ? total_ms / static_cast<double>(summary.frames) : 0.0;
  summary.downlink_received = downlink_received_;
  summary.downlink_malformed = downlink_malformed_;
  summary.operator_messages = operator_messages_;
  summary.twin_acknowledged = acknowledged_;
  return summary;
}

}  // namespace v2i::app
