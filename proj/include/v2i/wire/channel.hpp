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

#ifndef V2I_WIRE_CHANNEL_HPP_
#define V2I_WIRE_CHANNEL_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace v2i::wire {

// One-way delay = base_delay_ms + jitter, where jitter is log-normal with
// median jitter_median_ms and log-space deviation jitter_sigma (no jitter
// when the median is 0). Each datagram is dropped independently.
struct ChannelModel {
  double base_delay_ms = 0.0;
  double jitter_median_ms = 0.0;
  double jitter_sigma = 0.0;
  double drop_probability = 0.0;
  bool reorder_allowed = true;
  std::uint64_t seed = 1;

  void validate() const;

  double mean_delay_ms() const;
  double delay_std_ms() const;

  // Fits the log-normal jitter so the total delay has the requested mean and
  // standard deviation on top of `base_delay_ms`.
  static ChannelModel from_moments(double base_delay_ms, double mean_ms, double std_ms,
                                   double drop_probability, std::uint64_t seed);

  // Cellular uplink conditions measured on the reference deployment:
  // min 21.946 ms, mean 38.213 ms, std 28.177 ms, loss 2.795 %.
  static ChannelModel cellular_reference(std::uint64_t seed = 1);

  // Parses "lossless", "cellular[:seed]" or comma-separated key=value pairs
  // (base, median, sigma, mean, std, loss, seed, reorder). Throws
  // Errc::kConfig.
  static ChannelModel parse(const std::string& spec);
};

// Stateful channel: each call consumes randomness in submission order, so a
// fixed seed and input sequence always yield the same output.
class Channel {
 public:
  explicit Channel(ChannelModel model);

  // Delivery timestamp, or std::nullopt if the datagram is dropped.
  std::optional<std::uint64_t> transit(std::uint64_t send_ts_us);

  const ChannelModel& model() const { return model_; }

 private:
  ChannelModel model_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uint64_t last_delivery_us_ = 0;
};

struct Datagram {
  std::vector<std::uint8_t> bytes;
  std::uint64_t send_ts_us = 0;
};

struct DeliveredDatagram {
  std::vector<std::uint8_t> bytes;
  std::uint64_t send_ts_us = 0;
  std::uint64_t deliver_ts_us = 0;
  std::size_t index = 0;  // position in the submitted stream
};

// Delivered datagrams ordered by delivery time (ties by submission order).
std::vector<DeliveredDatagram> simulate_channel(const std::vector<Datagram>& stream,
                                                const ChannelModel& model);

}  // namespace v2i::wire

#endif  // V2I_WIRE_CHANNEL_HPP_
