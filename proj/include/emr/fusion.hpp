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
#include <utility>
#include <vector>

#include "emr/raster.hpp"

namespace emr {

struct LayerTransform {
  double scale = 1.0;
  int tx = 0;
  int ty = 0;
};

/// A keyed real object handled as a virtual layer.
struct RvoLayer {
  Frame pixels;
  AlphaMatte matte;
  LayerTransform transform;
  double depth = 0.0;  // larger is nearer
};

struct PlacedLayer {
  Frame pixels;
  AlphaMatte matte;
};

/// Nearest-neighbour scale then translate onto a canvas; uncovered pixels get alpha 0.
PlacedLayer place_layer(const RvoLayer& layer, int canvas_w, int canvas_h);

/// Far-to-near alpha blend of every layer over the background (stable in depth).
Frame compose(const Frame& background, std::span<const RvoLayer> layers);

struct ViewSource {
  std::string id;
  double angle_deg = 0.0;  // [0,360)
  std::string frames_dir;
};

/// Smallest circular angular distance to target, lowest index on ties.
std::size_t select_view(std::span<const ViewSource> views, double target_angle_deg);

double angular_distance(double a_deg, double b_deg) noexcept;

}  // namespace emr
