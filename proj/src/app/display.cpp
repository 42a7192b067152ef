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

#include "v2i/app/display.hpp"

#include <fmt/format.h>

namespace v2i::app {
namespace {

std::optional<safety::SafetyState> override_of(const wire::OperatorMessage& msg) {
  if (auto s = wire::to_safety_state(msg.state_override)) return s;
  if (msg.severity == wire::Severity::kRecall) return safety::SafetyState::kDangerous;
  return std::nullopt;
}

const char* ansi(safety::SafetyState s) {
  switch (s) {
    case safety::SafetyState::kSafe: return "\x1b[42;30m";
    case safety::SafetyState::kHazardous: return "\x1b[43;30m";
    case safety::SafetyState::kDangerous: return "\x1b[41;97m";
  }
  return "";
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

void OnboardDisplayState::set_local(safety::SafetyState s) {
  std::lock_guard lock(mu_);
  local_ = s;
}

void OnboardDisplayState::apply_operator(const wire::OperatorMessage& msg, std::uint64_t now_us) {
  std::lock_guard lock(mu_);
  override_ = override_of(msg);
  text_ = OperatorText{msg.text, msg.severity, now_us};
}

safety::SafetyState OnboardDisplayState::effective(std::uint64_t now_us) const {
  return view(now_us).effective;
}

OnboardDisplayState::View OnboardDisplayState::view(std::uint64_t now_us) const {
  std::lock_guard lock(mu_);
  View v;
  v.local = local_;
  v.effective = local_;
  v.operator_text = text_;
  if (text_) {
    const std::uint64_t age = now_us > text_->received_us ? now_us - text_->received_us : 0;
    v.operator_age_ms = age / 1000;
    if (override_ && age < kOverrideLifetimeUs) {
      v.active_override = override_;
      v.effective = safety::worst(local_, *override_);
    }
  }
  return v;
}

std::string render_dashboard_line(const safety::SafetyReport& report,
                                  const OnboardDisplayState::View& view, bool color) {
  std::string line = fmt::format("[{:>6}] ", report.frame_index);
  const std::string state = fmt::format("{:<9}", upper(safety::to_string(view.effective)));
  line += color ? fmt::format("{} {} \x1b[0m", ansi(view.effective), state)
                : fmt::format("{} ", state);
  line += fmt::format(" ego {:5.1f} m/s", report.ego_speed_mps);
  for (const auto& o : report.objects) {
    line += fmt::format(" | #{} {} {:.1f}m ttc {} thw {}{}", o.object_id,
                        scene::to_string(o.object_class), o.distance_m,
                        safety::format_metric(o.ttc_s), safety::format_metric(o.thw_s),
                        o.stale ? " (lost)" : "");
  }
  if (view.operator_text) {
    line += fmt::format(" | OPERATOR {} {}s: {}", upper(wire::to_string(view.operator_text->severity)),
                        view.operator_age_ms / 1000, view.operator_text->text);
  }
  return line;
}

}  // namespace v2i::app
