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

#ifndef V2I_WIRE_CODEC_HPP_
#define V2I_WIRE_CODEC_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "v2i/wire/messages.hpp"

namespace v2i::wire {

// Little-endian, unpadded. Throws Errc::kEncodeError if the message breaks
// an invariant (oversize text, invalid UTF-8, > 255 objects, NaN metrics,
// out-of-range enums or coordinates).
std::vector<std::uint8_t> encode(const Message& msg);

// Errors:
//   kNotOurProtocol  magic mismatch
//   kVersionMismatch version byte != kVersion
//   kTruncated       input ends inside a field; position() = field offset
//   kMalformed       unknown type, bad enum, bad lengths, trailing bytes,
//                    or field values outside the message invariants
Message decode(std::span<const std::uint8_t> bytes);

// Throws Errc::kEncodeError on the first violated invariant.
void validate(const Message& msg);

}  // namespace v2i::wire

#endif  // V2I_WIRE_CODEC_HPP_
