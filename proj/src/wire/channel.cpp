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

#include "v2i/wire/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "v2i/error.hpp"

namespace v2i::wire {

void ChannelModel::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(Errc::kInvalidArgument, what);
  };
  require(std::isfinite(base_delay_ms) && base_delay_ms >= 0.0, "base_delay_ms must be >= 0");
  require(std::isfinite(jitter_median_ms) && jitter_median_ms >= 0.0,
          "jitter_median_ms must be >= 0");
  require(std::isfinite(jitter_sigma) && jitter_sigma >= 0.0, "jitter_sigma must be >= 0");
  require(drop_probability >= 0.0 && drop_probability <= 1.0,
          "drop_probability must lie in [0, 1]");
}

double ChannelModel::mean_delay_ms() const {
  return base_delay_ms + jitter_median_ms * std::exp(0.5 * jitter_sigma * jitter_sigma);
}

double ChannelModel::delay_std_ms() const {
  const double s2 = jitter_sigma * jitter_sigma;
  return jitter_median_ms * std::sqrt((std::exp(s2) - 1.0) * std::exp(s2));
}

ChannelModel ChannelModel::from_moments(double base_delay_ms, double mean_ms, double std_ms,
                                        double drop_probability, std::uint64_t seed) {
  if (!(mean_ms > base_delay_ms) || !(std_ms > 0.0)) {
    throw Error(Errc::kInvalidArgument, "mean must exceed base delay and std must be > 0");
  }
  const double m = mean_ms - base_delay_ms;
  const double sigma2 = std::log1p((std_ms * std_ms) / (m * m));
  ChannelModel c;
  c.base_delay_ms = base_delay_ms;
  c.jitter_sigma = std::sqrt(sigma2);
  c.jitter_median_ms = m / std::exp(0.5 * sigma2);
  c.drop_probability = drop_probability;
  c.seed = seed;
  c.validate();
  return c;
}

ChannelModel ChannelModel::cellular_reference(std::uint64_t seed) {
  return from_moments(21.946, 38.213, 28.177, 0.02795, seed);
}

ChannelModel ChannelModel::parse(const std::string& spec) {
  if (spec.empty() || spec == "lossless") return ChannelModel{};
  if (spec.rfind("cellular", 0) == 0) {
    std::uint64_t seed = 1;
    if (spec.size() > 9 && spec[8] == ':') seed = std::stoull(spec.substr(9));
    return cellular_reference(seed);
  }
  ChannelModel c;
  std::optional<double> mean;
  std::optional<double> stddev;
  std::stringstream ss(spec);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(Errc::kConfig, "expected key=value: " + item);
      const auto key = item.substr(0, eq);
      const auto value = item.substr(eq + 1);
      if (key == "base") {
        c.base_delay_ms = std::stod(value);
      } else if (key == "median") {
        c.jitter_median_ms = std::stod(value);
      } else if (key == "sigma") {
        c.jitter_sigma = std::stod(value);
      } else if (key == "mean") {
        mean = std::stod(value);
      } else if (key == "std") {
        stddev = std::stod(value);
      } else if (key == "loss") {
        c.drop_probability = std::stod(value);
      } else if (key == "seed") {
        c.seed = std::stoull(value);
      } else if (key == "reorder") {
        c.reorder_allowed = value == "1" || value == "true";
      } else {
        throw Error(Errc::kConfig, "unknown channel key '" + key + "'");
      }
    }
  } catch (const std::logic_error& e) {
    throw Error(Errc::kConfig, "bad channel spec '" + spec + "': " + e.what());
  }
  if (mean || stddev) {
    if (!(mean && stddev)) throw Error(Errc::kConfig, "mean and std must be given together");
    const bool reorder = c.reorder_allowed;
    c = from_moments(c.base_delay_ms, *mean, *stddev, c.drop_probability, c.seed);
    c.reorder_allowed = reorder;
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(Errc::kConfig, e.what());
  }
  return c;
}

Channel::Channel(ChannelModel model) : model_(model), rng_(model.seed) { model_.validate(); }

std::optional<std::uint64_t> Channel::transit(std::uint64_t send_ts_us) {
  if (uniform_(rng_) < model_.drop_probability) return std::nullopt;
  double delay_ms = model_.base_delay_ms;
  if (model_.jitter_median_ms > 0.0) {
    delay_ms += model_.jitter_median_ms * std::exp(model_.jitter_sigma * normal_(rng_));
  }
  std::uint64_t deliver = send_ts_us + static_cast<std::uint64_t>(std::llround(delay_ms * 1000.0));
  if (!model_.reorder_allowed) deliver = std::max(deliver, last_delivery_us_);
  last_delivery_us_ = std::max(last_delivery_us_, deliver);
  return deliver;
}

std::vector<DeliveredDatagram> simulate_channel(const std::vector<Datagram>& stream,
                                                const ChannelModel& model) {
  Channel channel(model);
  std::vector<DeliveredDatagram> out;
  out.reserve(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (auto t = channel.transit(stream[i].send_ts_us)) {
      out.push_back({stream[i].bytes, stream[i].send_ts_us, *t, i});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.deliver_ts_us < b.deliver_ts_us;
  });
  return out;
}

}  // namespace v2i::wire
