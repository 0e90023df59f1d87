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

#include "emr/layering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "emr/error.hpp"

namespace emr {

void GmmParams::validate() const {
  if (max_components < 1) raise(ErrorCode::InvalidParams, "gmm K must be >= 1");
  if (!(match_sigmas > 0.0)) raise(ErrorCode::InvalidParams, "gmm lambda must be > 0");
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) raise(ErrorCode::InvalidParams, "gmm alpha_lr must be in [0,1]");
  if (!(background_weight > 0.0 && background_weight <= 1.0)) raise(ErrorCode::InvalidParams, "gmm T must be in (0,1]");
  if (!(var_min > 0.0)) raise(ErrorCode::InvalidParams, "gmm var_min must be > 0");
  if (!(var_init >= var_min)) raise(ErrorCode::InvalidParams, "gmm var_init must be >= var_min");
}

LayerModel::LayerModel(const Frame& first, const GmmParams& params)
    : width_(first.width()), height_(first.height()), channels_(first.channels()), params_(params) {
  params_.validate();
  const std::size_t n = first.pixel_count();
  comps_.assign(n * params_.max_components, GmmComponent{});
  counts_.assign(n, 1);
  auto d = first.data();
  for (std::size_t i = 0; i < n; ++i) {
    GmmComponent& c = comps_[i * params_.max_components];
    c.weight = 1.0;
    c.variance = params_.var_init;
    for (int ch = 0; ch < channels_; ++ch) c.mean[ch] = d[i * channels_ + ch];
  }
}

bool operator==(const LayerModel& a, const LayerModel& b) {
  if (a.width_ != b.width_ || a.height_ != b.height_ || a.channels_ != b.channels_ || a.counts_ != b.counts_)
    return false;
  const int k = a.params_.max_components;
  for (std::size_t p = 0; p < a.counts_.size(); ++p)
    for (int j = 0; j < a.counts_[p]; ++j) {
      const auto& x = a.comps_[p * k + j];
      const auto& y = b.comps_[p * k + j];
      if (x.weight != y.weight || x.variance != y.variance) return false;
      for (int c = 0; c < a.channels_; ++c)
        if (x.mean[c] != y.mean[c]) return false;
    }
  return true;
}

int LayerModel::match(const GmmComponent* comps, int count, const double* x) const noexcept {
  int best = -1;
  double best_d = 0.0;
  const double lam2 = params_.match_sigmas * params_.match_sigmas;
  for (int k = 0; k < count; ++k) {
    const double var = comps[k].variance;
    bool ok = true;
    double d = 0.0;
    for (int c = 0; c < channels_; ++c) {
      double diff = x[c] - comps[k].mean[c];
      // |diff| <= lambda*sigma, squared to stay exact on integer inputs
      if (diff * diff > lam2 * var) {
        ok = false;
        break;
      }
      d += diff * diff / var;
    }
    if (ok && (best < 0 || d < best_d)) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

bool LayerModel::in_background(const GmmComponent* comps, int count, int k) const {
  std::array<int, 64> order_buf{};
  std::vector<int> order_heap;
  int* order = order_buf.data();
  if (count > static_cast<int>(order_buf.size())) {
    order_heap.resize(count);
    order = order_heap.data();
  }
  std::iota(order, order + count, 0);
  std::stable_sort(order, order + count, [&](int a, int b) {
    return comps[a].weight / std::sqrt(comps[a].variance) > comps[b].weight / std::sqrt(comps[b].variance);
  });
  double cum = 0.0;
  for (int i = 0; i < count; ++i) {
    if (order[i] == k) return true;
    cum += comps[order[i]].weight;
    if (cum >= params_.background_weight) break;
  }
  return false;
}

bool LayerModel::classify_pixel(const GmmComponent* comps, int count, const double* x) const {
  int m = match(comps, count, x);
  return m < 0 || !in_background(comps, count, m);
}

void LayerModel::update_pixel(GmmComponent* comps, int& count, const double* x, int matched) const {
  const double lr = params_.learning_rate;
  if (lr == 0.0) return;
  if (matched >= 0) {
    for (int k = 0; k < count; ++k) comps[k].weight *= (1.0 - lr);
    GmmComponent& c = comps[matched];
    c.weight += lr;
    double d2 = 0.0;
    for (int ch = 0; ch < channels_; ++ch) {
      double diff = x[ch] - c.mean[ch];
      d2 += diff * diff;
      c.mean[ch] = (1.0 - lr) * c.mean[ch] + lr * x[ch];
    }
    d2 /= channels_;
    c.variance = std::max(params_.var_min, (1.0 - lr) * c.variance + lr * d2);
  } else {
    int slot = count;
    if (count == params_.max_components) {
      slot = 0;
      for (int k = 1; k < count; ++k)
        if (comps[k].weight < comps[slot].weight) slot = k;
    } else {
      ++count;
    }
    for (int k = 0; k < count; ++k)
      if (k != slot) comps[k].weight *= (1.0 - lr);
    GmmComponent& c = comps[slot];
    c.weight = lr;
    c.variance = params_.var_init;
    for (int ch = 0; ch < channels_; ++ch) c.mean[ch] = x[ch];
  }
  // Components whose weight decayed to exactly zero (lr == 1) are dropped.
  int kept = 0;
  for (int k = 0; k < count; ++k)
    if (comps[k].weight > 0.0) comps[kept++] = comps[k];
  count = kept;
  double total = 0.0;
  for (int k = 0; k < count; ++k) total += comps[k].weight;
  for (int k = 0; k < count; ++k) comps[k].weight /= total;
}

Frame LayerModel::classify(const Frame& f) const {
  if (f.width() != width_ || f.height() != height_ || f.channels() != channels_)
    raise(ErrorCode::DimensionMismatch, "frame does not match layer model dimensions");
  Frame mask(width_, height_, 1);
  mask.set_index(f.index());
  auto d = f.data();
  auto m = mask.data();
  const int K = params_.max_components;
  double x[3];
  for (std::size_t p = 0; p < counts_.size(); ++p) {
    for (int c = 0; c < channels_; ++c) x[c] = d[p * channels_ + c];
    m[p] = classify_pixel(&comps_[p * K], counts_[p], x) ? 255 : 0;
  }
  return mask;
}

Frame LayerModel::update_classify(const Frame& f) {
  if (f.width() != width_ || f.height() != height_ || f.channels() != channels_)
    raise(ErrorCode::DimensionMismatch, "frame does not match layer model dimensions");
  Frame mask(width_, height_, 1);
  mask.set_index(f.index());
  auto d = f.data();
  auto m = mask.data();
  const int K = params_.max_components;
  double x[3];
  for (std::size_t p = 0; p < counts_.size(); ++p) {
    for (int c = 0; c < channels_; ++c) x[c] = d[p * channels_ + c];
    GmmComponent* comps = &comps_[p * K];
    int matched = match(comps, counts_[p], x);
    bool fg = matched < 0 || !in_background(comps, counts_[p], matched);
    m[p] = fg ? 255 : 0;
    update_pixel(comps, counts_[p], x, matched);
  }
  return mask;
}

namespace {

Frame erode3(const Frame& in) {
  Frame out(in.width(), in.height(), 1);
  out.set_index(in.index());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x) {
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy)
        for (int dx = -1; dx <= 1 && all; ++dx) {
          int xx = x + dx, yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= in.width() || yy >= in.height() || in.at(xx, yy) == 0) all = false;
        }
      out.at(x, y) = all ? 255 : 0;
    }
  return out;
}

Frame dilate3(const Frame& in) {
  Frame out(in.width(), in.height(), 1);
  out.set_index(in.index());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x) {
      bool any = false;
      for (int dy = -1; dy <= 1 && !any; ++dy)
        for (int dx = -1; dx <= 1 && !any; ++dx) {
          int xx = x + dx, yy = y + dy;
          if (xx >= 0 && yy >= 0 && xx < in.width() && yy < in.height() && in.at(xx, yy) != 0) any = true;
        }
      out.at(x, y) = any ? 255 : 0;
    }
  return out;
}

}  // namespace

Frame mask_postprocess(const Frame& mask) {
  if (mask.channels() != 1) raise(ErrorCode::InvalidMask, "mask must be single-channel");
  for (auto v : mask.data())
    if (v != 0 && v != 255) raise(ErrorCode::InvalidMask, "mask values must be 0 or 255");
  return dilate3(erode3(mask));
}

std::size_t count_foreground(const Frame& mask) noexcept {
  return static_cast<std::size_t>(std::count_if(mask.data().begin(), mask.data().end(), [](auto v) { return v != 0; }));
}

}  // namespace emr
