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

#include "emr/matting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "emr/error.hpp"

namespace emr {

namespace {

// Separable square min/max filter with replicated edges.
template <typename Op>
std::vector<std::uint8_t> square_filter(const Frame& mask, int r, Op op) {
  const int w = mask.width(), h = mask.height();
  std::vector<std::uint8_t> src(mask.data().begin(), mask.data().end());
  if (r == 0) return src;
  std::vector<std::uint8_t> tmp(src.size()), out(src.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint8_t acc = src[static_cast<std::size_t>(y) * w + x];
      for (int d = -r; d <= r; ++d) acc = op(acc, src[static_cast<std::size_t>(y) * w + std::clamp(x + d, 0, w - 1)]);
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint8_t acc = tmp[static_cast<std::size_t>(y) * w + x];
      for (int d = -r; d <= r; ++d) acc = op(acc, tmp[static_cast<std::size_t>(std::clamp(y + d, 0, h - 1)) * w + x]);
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  return out;
}

// Summed-area table over (w+1)x(h+1).
class Integral {
 public:
  Integral(int w, int h) : w_(w), h_(h), sum_(static_cast<std::size_t>(w + 1) * (h + 1), 0) {}

  template <typename F>
  void build(F value) {
    for (int y = 0; y < h_; ++y) {
      std::int64_t row = 0;
      for (int x = 0; x < w_; ++x) {
        row += value(static_cast<std::size_t>(y) * w_ + x);
        sum_[idx(x + 1, y + 1)] = sum_[idx(x + 1, y)] + row;
      }
    }
  }

  // Inclusive rectangle [x0,x1]x[y0,y1], already clipped.
  std::int64_t rect(int x0, int y0, int x1, int y1) const {
    return sum_[idx(x1 + 1, y1 + 1)] - sum_[idx(x0, y1 + 1)] - sum_[idx(x1 + 1, y0)] + sum_[idx(x0, y0)];
  }

 private:
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * (w_ + 1) + x; }
  int w_, h_;
  std::vector<std::int64_t> sum_;
};

}  // namespace

Trimap trimap_from_mask(const Frame& mask, int r_fg, int r_bg) {
  if (r_fg < 0 || r_bg < r_fg) raise(ErrorCode::InvalidRadii, "need r_bg >= r_fg >= 0");
  if (mask.channels() != 1) raise(ErrorCode::InvalidMask, "mask must be single-channel");
  for (auto v : mask.data())
    if (v != 0 && v != 255) raise(ErrorCode::InvalidMask, "mask values must be 0 or 255");
  auto eroded = square_filter(mask, r_fg, [](std::uint8_t a, std::uint8_t b) { return std::min(a, b); });
  auto dilated = square_filter(mask, r_bg, [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); });
  Trimap t(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      std::size_t i = static_cast<std::size_t>(y) * mask.width() + x;
      if (eroded[i]) t.set(x, y, Label::Foreground);
      else if (!dilated[i]) t.set(x, y, Label::Background);
    }
  return t;
}

std::size_t MattingResult::degenerate_count() const noexcept {
  return static_cast<std::size_t>(std::count(degenerate.begin(), degenerate.end(), std::uint8_t{1}));
}

MattingResult alpha_solve(const Frame& f, const Trimap& t, const MattingParams& params) {
  if (f.width() != t.width() || f.height() != t.height())
    raise(ErrorCode::DimensionMismatch, "frame and trimap dimensions differ");
  if (params.window < 1 || params.max_iters < 1 || !(params.eps > 0.0))
    raise(ErrorCode::InvalidParams, "matting needs window >= 1, max_iters >= 1, eps > 0");
  const int w = f.width(), h = f.height(), ch = f.channels();
  const std::size_t n = f.pixel_count();
  auto labels = t.labels();

  std::vector<double> alpha(n);
  std::vector<std::size_t> unknown;
  bool any_fg = false, any_bg = false;
  for (std::size_t i = 0; i < n; ++i) {
    switch (labels[i]) {
      case Label::Foreground: alpha[i] = 1.0; any_fg = true; break;
      case Label::Background: alpha[i] = 0.0; any_bg = true; break;
      case Label::Unknown: alpha[i] = 0.5; unknown.push_back(i); break;
    }
  }

  MattingResult res;
  res.degenerate.assign(n, 0);
  if (unknown.empty()) {
    res.matte = AlphaMatte(w, h, std::move(alpha));
    return res;
  }
  if (!any_fg || !any_bg) raise(ErrorCode::InsufficientLabels, "UNKNOWN pixels need both FG and BG labels");

  auto pix = f.data();
  std::vector<double> raw(n, 0.0), next(n, 0.0);
  std::vector<std::uint8_t> is_fg(n), is_bg(n);
  Integral fg_count(w, h), bg_count(w, h);
  std::vector<Integral> fg_sum(ch, Integral(w, h)), bg_sum(ch, Integral(w, h));

  for (int it = 1; it <= params.max_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool unk = labels[i] == Label::Unknown;
      is_fg[i] = labels[i] == Label::Foreground || (unk && alpha[i] > 0.95);
      is_bg[i] = labels[i] == Label::Background || (unk && alpha[i] < 0.05);
    }
    fg_count.build([&](std::size_t i) { return is_fg[i]; });
    bg_count.build([&](std::size_t i) { return is_bg[i]; });
    for (int c = 0; c < ch; ++c) {
      fg_sum[c].build([&](std::size_t i) { return is_fg[i] ? pix[i * ch + c] : 0; });
      bg_sum[c].build([&](std::size_t i) { return is_bg[i] ? pix[i * ch + c] : 0; });
    }

    for (std::size_t i : unknown) {
      const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
      int r = params.window;
      int x0, y0, x1, y1;
      std::int64_t nf, nb;
      for (;;) {
        x0 = std::max(0, x - r), y0 = std::max(0, y - r);
        x1 = std::min(w - 1, x + r), y1 = std::min(h - 1, y + r);
        nf = fg_count.rect(x0, y0, x1, y1);
        nb = bg_count.rect(x0, y0, x1, y1);
        if ((nf > 0 && nb > 0) || (x0 == 0 && y0 == 0 && x1 == w - 1 && y1 == h - 1)) break;
        r *= 2;
      }
      double num = 0.0, den = 0.0;
      for (int c = 0; c < ch; ++c) {
        double fhat = static_cast<double>(fg_sum[c].rect(x0, y0, x1, y1)) / nf;
        double bhat = static_cast<double>(bg_sum[c].rect(x0, y0, x1, y1)) / nb;
        double d = fhat - bhat;
        num += (pix[i * ch + c] - bhat) * d;
        den += d * d;
      }
      if (den < 1.0) {
        res.degenerate[i] = 1;
        raw[i] = 0.5;
      } else {
        res.degenerate[i] = 0;
        raw[i] = std::clamp(num / den, 0.0, 1.0);
      }
    }

    double change = 0.0;
    for (std::size_t i : unknown) {
      if (res.degenerate[i]) {
        next[i] = 0.5;
      } else {
        const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
        double s = 0.0;
        int cnt = 0;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            int xx = x + dx, yy = y + dy;
            if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
            std::size_t j = static_cast<std::size_t>(yy) * w + xx;
            if (labels[j] != Label::Unknown || res.degenerate[j]) continue;
            s += raw[j];
            ++cnt;
          }
        next[i] = s / cnt;
      }
      change = std::max(change, std::abs(next[i] - alpha[i]));
    }
    for (std::size_t i : unknown) alpha[i] = next[i];
    res.max_change.push_back(change);
    res.iterations = it;
    if (change < params.eps) break;
  }
  res.matte = AlphaMatte(w, h, std::move(alpha));
  return res;
}

FuzzyKnowledge::FuzzyKnowledge(int width, int height, double learning_rate, double initial)
    : width_(width), height_(height), learning_rate_(learning_rate) {
  if (width < 1 || height < 1) raise(ErrorCode::DimensionMismatch, "fuzzy knowledge dimensions must be >= 1");
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) raise(ErrorCode::InvalidParams, "lambda_t must be in [0,1]");
  if (!(initial >= 0.0 && initial <= 1.0)) raise(ErrorCode::InvalidParams, "membership must be in [0,1]");
  membership_.assign(static_cast<std::size_t>(width) * height, initial);
}

FuzzyKnowledge FuzzyKnowledge::updated(const AlphaMatte& m) const {
  if (m.width() != width_ || m.height() != height_)
    raise(ErrorCode::DimensionMismatch, "matte does not match fuzzy knowledge dimensions");
  FuzzyKnowledge out = *this;
  auto a = m.alpha();
  const double lt = learning_rate_;
  for (std::size_t i = 0; i < membership_.size(); ++i) {
    double v = (1.0 - lt) * membership_[i] + lt * a[i];
    out.membership_[i] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

}  // namespace emr
