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

#include "emr/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emr/error.hpp"

namespace emr {

PlacedLayer place_layer(const RvoLayer& layer, int canvas_w, int canvas_h) {
  const auto& src = layer.pixels;
  if (!(layer.transform.scale > 0.0) || !std::isfinite(layer.transform.scale))
    raise(ErrorCode::InvalidTransform, "layer scale must be > 0");
  if (src.width() != layer.matte.width() || src.height() != layer.matte.height())
    raise(ErrorCode::DimensionMismatch, "layer pixels and matte dimensions differ");
  const double s = layer.transform.scale;
  const long sw = std::max(1L, std::lround(src.width() * s));
  const long sh = std::max(1L, std::lround(src.height() * s));

  PlacedLayer out{Frame(canvas_w, canvas_h, src.channels()), AlphaMatte(canvas_w, canvas_h, 0.0)};
  for (int cy = 0; cy < canvas_h; ++cy) {
    const long ly = static_cast<long>(cy) - layer.transform.ty;
    if (ly < 0 || ly >= sh) continue;
    const int sy = std::min(src.height() - 1, static_cast<int>(std::floor(ly / s)));
    for (int cx = 0; cx < canvas_w; ++cx) {
      const long lx = static_cast<long>(cx) - layer.transform.tx;
      if (lx < 0 || lx >= sw) continue;
      const int sx = std::min(src.width() - 1, static_cast<int>(std::floor(lx / s)));
      for (int c = 0; c < src.channels(); ++c) out.pixels.at(cx, cy, c) = src.at(sx, sy, c);
      out.matte.set(cx, cy, layer.matte.at(sx, sy));
    }
  }
  return out;
}

Frame compose(const Frame& background, std::span<const RvoLayer> layers) {
  std::vector<std::size_t> order(layers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return layers[a].depth < layers[b].depth; });

  Frame out = background;
  const int ch = background.channels();
  for (std::size_t li : order) {
    const RvoLayer& layer = layers[li];
    if (layer.pixels.channels() != 1 && layer.pixels.channels() != ch)
      raise(ErrorCode::InvalidChannels, "layer channels incompatible with background");
    PlacedLayer placed = place_layer(layer, background.width(), background.height());
    const int lch = placed.pixels.channels();
    for (int y = 0; y < out.height(); ++y)
      for (int x = 0; x < out.width(); ++x) {
        const double a = placed.matte.at(x, y);
        if (a == 0.0) continue;
        for (int c = 0; c < ch; ++c) {
          const double fg = placed.pixels.at(x, y, lch == 1 ? 0 : c);
          out.at(x, y, c) = to_u8(a * fg + (1.0 - a) * out.at(x, y, c));
        }
      }
  }
  return out;
}

double angular_distance(double a_deg, double b_deg) noexcept {
  double d = std::fmod(std::abs(a_deg - b_deg), 360.0);
  return std::min(d, 360.0 - d);
}

std::size_t select_view(std::span<const ViewSource> views, double target_angle_deg) {
  if (views.empty()) raise(ErrorCode::NoViews, "no camera views configured");
  std::size_t best = 0;
  double best_d = 0.0;
  for (std::size_t i = 0; i < views.size(); ++i) {
    const double a = views[i].angle_deg;
    if (!(a >= 0.0 && a < 360.0)) raise(ErrorCode::InvalidParams, "view angle must be in [0,360)");
    const double d = angular_distance(a, target_angle_deg);
    if (i == 0 || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

}  // namespace emr
