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

#ifndef V2I_APP_DISPLAY_HPP_
#define V2I_APP_DISPLAY_HPP_

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>

#include "v2i/safety/tracker.hpp"
#include "v2i/wire/messages.hpp"

namespace v2i::app {

inline constexpr std::uint64_t kOverrideLifetimeUs = 10'000'000;

// On-board display. The background shows the more severe of the local state
// and the operator's override; an override lapses 10 s after the message
// that carried it. A Recall without an explicit override counts as
// Dangerous. Each operator message replaces the previous one.
class OnboardDisplayState {
 public:
  struct OperatorText {
    std::string text;
    wire::Severity severity = wire::Severity::kInfo;
    std::uint64_t received_us = 0;
  };

  struct View {
    safety::SafetyState local = safety::SafetyState::kSafe;
    safety::SafetyState effective = safety::SafetyState::kSafe;
    std::optional<safety::SafetyState> active_override;
    std::optional<OperatorText> operator_text;
    std::uint64_t operator_age_ms = 0;
  };

  void set_local(safety::SafetyState s);
  void apply_operator(const wire::OperatorMessage& msg, std::uint64_t now_us);

  safety::SafetyState effective(std::uint64_t now_us) const;
  View view(std::uint64_t now_us) const;

 private:
  mutable std::mutex mu_;
  safety::SafetyState local_ = safety::SafetyState::kSafe;
  std::optional<safety::SafetyState> override_;
  std::optional<OperatorText> text_;
};

// One dashboard line: frame, background state, per-object distance/TTC/THW
// and the latest operator text. ANSI colours when `color` is set.
std::string render_dashboard_line(const safety::SafetyReport& report,
                                  const OnboardDisplayState::View& view, bool color);

}  // namespace v2i::app

#endif  // V2I_APP_DISPLAY_HPP_
