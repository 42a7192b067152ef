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

#ifndef V2I_ERROR_HPP_
#define V2I_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace v2i {

enum class Errc {
  kInvalidArgument,
  kDegenerateDisparity,
  kParseError,
  kStreamOrder,
  kNoObservation,
  kNoVelocity,
  kDegenerateGeometry,
  kInvalidDepthSample,
  kInvalidYaw,
  kEncodeError,
  kNotOurProtocol,
  kTruncated,
  kVersionMismatch,
  kMalformed,
  kNoData,
  kIo,
  kConfig,
};

std::string_view to_string(Errc code);

// Single exception type for the whole library. `position` carries the
// 1-based line number for kParseError and the byte offset for kTruncated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what,
        std::optional<std::size_t> position = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  Errc code_;
  std::optional<std::size_t> position_;
};

}  // namespace v2i

#endif  // V2I_ERROR_HPP_
