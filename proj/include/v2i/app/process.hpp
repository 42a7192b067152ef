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

#ifndef V2I_APP_PROCESS_HPP_
#define V2I_APP_PROCESS_HPP_

#include <atomic>

namespace v2i::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

// SIGINT and SIGTERM set the returned flag.
const std::atomic<bool>& install_stop_handlers();

// Routes log output to stderr so stdout carries only the dashboard.
void init_logging();

}  // namespace v2i::app

#endif  // V2I_APP_PROCESS_HPP_
