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

#include "v2i/error.hpp"

namespace v2i {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kDegenerateDisparity: return "DegenerateDisparity";
    case Errc::kParseError: return "ParseError";
    case Errc::kStreamOrder: return "StreamOrderError";
    case Errc::kNoObservation: return "NoObservation";
    case Errc::kNoVelocity: return "NoVelocity";
    case Errc::kDegenerateGeometry: return "DegenerateGeometry";
    case Errc::kInvalidDepthSample: return "InvalidDepthSample";
    case Errc::kInvalidYaw: return "InvalidYaw";
    case Errc::kEncodeError: return "EncodeError";
    case Errc::kNotOurProtocol: return "NotOurProtocol";
    case Errc::kTruncated: return "Truncated";
    case Errc::kVersionMismatch: return "VersionMismatch";
    case Errc::kMalformed: return "Malformed";
    case Errc::kNoData: return "NoData";
    case Errc::kIo: return "IoError";
    case Errc::kConfig: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what,
             std::optional<std::size_t> position)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      position_(position) {}

}  // namespace v2i
