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

#include "emr/qoe.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "emr/error.hpp"

namespace emr {

double estimate_bits_per_frame(int width, int height, int channels, int scale_factor, int quant_step) {
  if (scale_factor < 1) raise(ErrorCode::InvalidFactor, "scale factor must be >= 1");
  if (quant_step < 1 || quant_step > 128) raise(ErrorCode::InvalidStep, "quantization step must be in [1,128]");
  const double samples = static_cast<double>(width / scale_factor) * (height / scale_factor) * channels;
  const int distinct = (2 * 255 + quant_step) / (2 * quant_step) + 1;
  const double bits_per_sample = std::ceil(std::log2(static_cast<double>(distinct)));
  return samples * bits_per_sample;
}

double mos_of(double bits_per_frame, double fps, const MosModel& model) {
  if (!(model.b0 > 0.0) || !(model.bmax > model.b0)) raise(ErrorCode::InvalidModel, "MOS model needs bmax > b0 > 0");
  if (!(fps > 0.0)) raise(ErrorCode::InvalidModel, "fps must be > 0");
  if (bits_per_frame < 0.0) raise(ErrorCode::InvalidModel, "bits per frame must be >= 0");
  const double b = bits_per_frame * fps;
  const double mos = 1.0 + 4.0 * std::log1p(b / model.b0) / std::log1p(model.bmax / model.b0);
  return std::clamp(mos, 1.0, 5.0);
}

double latency_of(const EncodingLevel& level, const ChannelModel& channel) {
  if (!(channel.capacity > 0.0)) raise(ErrorCode::InvalidChannel, "channel capacity must be > 0");
  if (channel.base_delay < 0.0) raise(ErrorCode::InvalidChannel, "base delay must be >= 0");
  return channel.base_delay + level.bits_per_frame / channel.capacity;
}

QoeQosScore score(const EncodingLevel& level, const ChannelModel& channel, double fps, const MosModel& model,
                  const LatencyBounds& bounds) {
  if (!(bounds.min >= 0.0) || !(bounds.max > bounds.min)) raise(ErrorCode::InvalidBounds, "need L_max > L_min >= 0");
  QoeQosScore s;
  s.mos = mos_of(level.bits_per_frame, fps, model);
  s.latency = latency_of(level, channel);
  s.qoe_norm = std::clamp((s.mos - 1.0) / 4.0, 0.0, 1.0);
  s.qos_norm = std::clamp((bounds.max - s.latency) / (bounds.max - bounds.min), 0.0, 1.0);
  return s;
}

Selection select_encoding(std::span<const EncodingLevel> levels, const ChannelModel& channel, double fps,
                          const MosModel& model, Policy policy, double w, const SelectionConstraints& constraints,
                          const LatencyBounds& bounds) {
  if (levels.empty()) raise(ErrorCode::NoLevels, "no encoding levels");
  if (!(w >= 0.0 && w <= 1.0)) raise(ErrorCode::InvalidParams, "balance weight must be in [0,1]");
  std::set<std::string> ids;
  for (const auto& l : levels) {
    if (!(l.bits_per_frame > 0.0)) raise(ErrorCode::InvalidParams, "level '" + l.id + "' has non-positive bits");
    if (!ids.insert(l.id).second) raise(ErrorCode::InvalidParams, "duplicate level id '" + l.id + "'");
  }

  std::vector<QoeQosScore> scores;
  scores.reserve(levels.size());
  for (const auto& l : levels) scores.push_back(score(l, channel, fps, model, bounds));

  auto feasible = [&](std::size_t i) {
    switch (policy) {
      case Policy::OptimalQoe: return scores[i].latency <= constraints.latency_max;
      case Policy::OptimalQos: return scores[i].mos >= constraints.mos_min;
      case Policy::Balance: return true;
    }
    return false;
  };
  // true when candidate i beats the incumbent j
  auto better = [&](std::size_t i, std::size_t j) {
    const auto &a = scores[i], &b = scores[j];
    switch (policy) {
      case Policy::OptimalQoe:
        if (a.mos != b.mos) return a.mos > b.mos;
        return levels[i].bits_per_frame < levels[j].bits_per_frame;
      case Policy::OptimalQos:
        if (a.latency != b.latency) return a.latency < b.latency;
        return a.mos > b.mos;
      case Policy::Balance: {
        const double ua = w * a.qoe_norm + (1.0 - w) * a.qos_norm;
        const double ub = w * b.qoe_norm + (1.0 - w) * b.qos_norm;
        if (ua != ub) return ua > ub;
        return levels[i].bits_per_frame < levels[j].bits_per_frame;
      }
    }
    return false;
  };

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (feasible(i) && (!best || better(i, *best))) best = i;

  Selection sel;
  if (best) {
    sel.index = *best;
  } else {
    sel.degraded = true;
    sel.index = 0;
    for (std::size_t i = 1; i < levels.size(); ++i)
      if (levels[i].bits_per_frame < levels[sel.index].bits_per_frame) sel.index = i;
  }
  sel.score = scores[sel.index];
  return sel;
}

Frame reencode(const Frame& f, const EncodingLevel& level) {
  return quantize(downsample(f, level.scale_factor), level.quant_step);
}

Policy parse_policy(const std::string& s) {
  if (s == "qoe") return Policy::OptimalQoe;
  if (s == "qos") return Policy::OptimalQos;
  if (s == "balance") return Policy::Balance;
  raise(ErrorCode::InvalidValue, "policy must be qoe, qos or balance, got '" + s + "'");
}

const char* policy_name(Policy p) noexcept {
  switch (p) {
    case Policy::OptimalQoe: return "qoe";
    case Policy::OptimalQos: return "qos";
    case Policy::Balance: return "balance";
  }
  return "?";
}

}  // namespace emr
