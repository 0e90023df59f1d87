// Copyright 2026 The EMR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "emr/raster.hpp"

namespace emr {

struct EncodingLevel {
  std::string id;
  int scale_factor = 1;
  int quant_step = 1;
  double bits_per_frame = 0.0;
};

/// Bits for one frame of the given geometry at this level: downsampled sample
/// count times ceil(log2(#distinct quantised values)).
double estimate_bits_per_frame(int width, int height, int channels, int scale_factor, int quant_step);

struct ChannelModel {
  double capacity = 1e7;  // bits/s
  double base_delay = 0.0;
  double loss_prob = 0.0;
};

/// Logarithmic MOS law anchored at b0 (low) and bmax (MOS 5).
struct MosModel {
  double b0 = 1e6;
  double bmax = 8e6;
};

struct LatencyBounds {
  double min = 0.0;
  double max = 0.5;
};

struct QoeQosScore {
  double mos = 1.0;
  double latency = 0.0;
  double qoe_norm = 0.0;
  double qos_norm = 0.0;
};

enum class Policy { OptimalQoe, OptimalQos, Balance };

struct SelectionConstraints {
  double mos_min = 1.0;
  double latency_max = 0.5;
};

struct Selection {
  std::size_t index = 0;
  bool degraded = false;
  QoeQosScore score;
};

double mos_of(double bits_per_frame, double fps, const MosModel& model);
double latency_of(const EncodingLevel& level, const ChannelModel& channel);
QoeQosScore score(const EncodingLevel& level, const ChannelModel& channel, double fps, const MosModel& model,
                  const LatencyBounds& bounds);

/// Picks a level under the policy; infeasible policies fall back to the
/// lowest-bits level with degraded set. For BALANCE the score is
/// w*qoe_norm + (1-w)*qos_norm with qos normalised against bounds.
Selection select_encoding(std::span<const EncodingLevel> levels, const ChannelModel& channel, double fps,
                          const MosModel& model, Policy policy, double w, const SelectionConstraints& constraints,
                          const LatencyBounds& bounds);

Frame reencode(const Frame& f, const EncodingLevel& level);

Policy parse_policy(const std::string& s);
const char* policy_name(Policy p) noexcept;

}  // namespace emr
