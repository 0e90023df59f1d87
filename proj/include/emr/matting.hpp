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

#include <cstdint>
#include <vector>

#include "emr/raster.hpp"

namespace emr {

/// FG = erode(mask, r_fg), BG = not dilate(mask, r_bg), rest UNKNOWN.
/// Square structuring elements of radius r, edges replicated.
Trimap trimap_from_mask(const Frame& mask, int r_fg, int r_bg);

struct MattingParams {
  int window = 3;  // initial half-width w of the (2w+1)^2 sampling window
  int max_iters = 20;
  double eps = 1.0 / 255.0;
};

struct MattingResult {
  AlphaMatte matte;
  int iterations = 0;
  /// 1 where the local foreground and background estimates coincided.
  std::vector<std::uint8_t> degenerate;
  /// Max per-pixel |change| of each iteration, in order.
  std::vector<double> max_change;

  std::size_t degenerate_count() const noexcept;
};

/// Recursive local-colour alpha estimation over the UNKNOWN band.
///
/// Every iteration reads only the previous iterate. For each UNKNOWN pixel,
/// the local foreground colour is the mean over the window of FG-labelled
/// pixels and UNKNOWN pixels whose previous alpha exceeds 0.95; the
/// background colour likewise with BG labels and alpha below 0.05. The
/// window doubles until both sample sets are non-empty. The raw estimate is
/// the projection of (C - B) onto (F - B), clamped to [0,1], followed by one
/// 3x3 mean over neighbouring non-degenerate UNKNOWN pixels.
MattingResult alpha_solve(const Frame& f, const Trimap& t, const MattingParams& params = {});

/// Temporal foreground membership, a fuzzy set updated per frame.
class FuzzyKnowledge {
 public:
  FuzzyKnowledge(int width, int height, double learning_rate, double initial = 0.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double learning_rate() const noexcept { return learning_rate_; }
  std::span<const double> membership() const noexcept { return membership_; }
  double at(int x, int y) const noexcept { return membership_[static_cast<std::size_t>(y) * width_ + x]; }

  /// membership <- (1 - lambda_t) * membership + lambda_t * alpha
  FuzzyKnowledge updated(const AlphaMatte& m) const;

 private:
  int width_;
  int height_;
  double learning_rate_;
  std::vector<double> membership_;
};

inline FuzzyKnowledge fuzzy_update(const FuzzyKnowledge& k, const AlphaMatte& m) { return k.updated(m); }

}  // namespace emr
