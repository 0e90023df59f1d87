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

struct GmmParams {
  int max_components = 3;      // K
  double match_sigmas = 2.5;   // lambda: match half-width in standard deviations
  double learning_rate = 0.02; // alpha_lr in [0,1]
  double background_weight = 0.7;  // T in (0,1]
  double var_init = 225.0;
  double var_min = 4.0;

  /// Throws InvalidParams when any bound is violated.
  void validate() const;
};

struct GmmComponent {
  double weight = 0.0;
  double variance = 0.0;
  double mean[3] = {0.0, 0.0, 0.0};
};

/// Adaptive per-pixel mixture-of-Gaussians background model.
///
/// Each pixel holds between 1 and K components with a shared (isotropic)
/// variance across channels. A component matches an observation when every
/// channel lies within match_sigmas standard deviations of its mean; among
/// matching components the one with the smallest normalised squared distance
/// wins. The background set is the shortest prefix, in descending
/// weight/sigma order, whose cumulative weight reaches background_weight.
class LayerModel {
 public:
  LayerModel(const Frame& first, const GmmParams& params);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  const GmmParams& params() const noexcept { return params_; }

  /// Classifies f against the current model, then folds f into the model.
  /// Returns a 1-channel mask (255 = foreground, 0 = background).
  Frame update_classify(const Frame& f);

  /// Classification alone; the model is left untouched.
  Frame classify(const Frame& f) const;

  int component_count(int x, int y) const noexcept { return counts_[pixel(x, y)]; }
  const GmmComponent& component(int x, int y, int k) const noexcept {
    return comps_[pixel(x, y) * params_.max_components + k];
  }

  friend bool operator==(const LayerModel& a, const LayerModel& b);

 private:
  std::size_t pixel(int x, int y) const noexcept { return static_cast<std::size_t>(y) * width_ + x; }
  int match(const GmmComponent* comps, int count, const double* x) const noexcept;
  bool in_background(const GmmComponent* comps, int count, int k) const;
  bool classify_pixel(const GmmComponent* comps, int count, const double* x) const;
  void update_pixel(GmmComponent* comps, int& count, const double* x, int matched) const;

  int width_;
  int height_;
  int channels_;
  GmmParams params_;
  std::vector<GmmComponent> comps_;
  std::vector<int> counts_;
};

inline LayerModel layer_init(const Frame& f, const GmmParams& params) { return LayerModel(f, params); }

/// 3x3 morphological opening of a binary mask. Out-of-frame pixels count as
/// background. Throws InvalidMask on values other than 0/255.
Frame mask_postprocess(const Frame& mask);

std::size_t count_foreground(const Frame& mask) noexcept;

}  // namespace emr
