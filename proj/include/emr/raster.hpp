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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace emr {

/// 8-bit raster, row-major, interleaved channels. Channels is 1 or 3.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, int channels);  // zero-filled
  Frame(int width, int height, int channels, std::vector<std::uint8_t> data, std::int64_t index = 0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::int64_t index() const noexcept { return index_; }
  void set_index(std::int64_t index) noexcept { index_ = index; }

  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  std::uint8_t at(int x, int y, int c = 0) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t& at(int x, int y, int c = 0) noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  bool same_shape(const Frame& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }
  friend bool operator==(const Frame& a, const Frame& b) {
    return a.same_shape(b) && a.index_ == b.index_ && a.data_ == b.data_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::int64_t index_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Per-pixel opacity in [0,1].
class AlphaMatte {
 public:
  AlphaMatte() = default;
  AlphaMatte(int width, int height, double fill = 0.0);
  AlphaMatte(int width, int height, std::vector<double> alpha);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const double> alpha() const noexcept { return alpha_; }

  double at(int x, int y) const noexcept { return alpha_[static_cast<std::size_t>(y) * width_ + x]; }
  /// Values are clamped to [0,1] on write.
  void set(int x, int y, double a) noexcept;

  friend bool operator==(const AlphaMatte&, const AlphaMatte&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> alpha_;
};

enum class Label : std::uint8_t { Background = 0, Foreground = 1, Unknown = 2 };

class Trimap {
 public:
  Trimap() = default;
  Trimap(int width, int height, Label fill = Label::Unknown);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const Label> labels() const noexcept { return labels_; }

  Label at(int x, int y) const noexcept { return labels_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, Label l) noexcept { labels_[static_cast<std::size_t>(y) * width_ + x] = l; }

  friend bool operator==(const Trimap&, const Trimap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Label> labels_;
};

/// Rounds half away from zero and clamps to [0,255].
std::uint8_t to_u8(double v) noexcept;

Frame to_grayscale(const Frame& f);
Frame downsample(const Frame& f, int factor);
/// Nearest-neighbour enlargement by an integer factor (inverse shape of downsample).
Frame upsample_nearest(const Frame& f, int factor);
Frame quantize(const Frame& f, int step);

// Binary PPM (P6) / PGM (P5), maxval 255.
std::vector<std::uint8_t> encode_pnm(const Frame& f);
Frame decode_pnm(std::span<const std::uint8_t> bytes);

Frame read_pnm(const std::filesystem::path& path);
void write_pnm(const std::filesystem::path& path, const Frame& f);

/// α quantized to round(α·255) as a single-channel frame.
Frame matte_to_frame(const AlphaMatte& m);
AlphaMatte frame_to_matte(const Frame& f);

}  // namespace emr
