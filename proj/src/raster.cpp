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

#include "emr/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "emr/error.hpp"

namespace emr {

namespace {

void check_shape(int width, int height, int channels) {
  if (width < 1 || height < 1) raise(ErrorCode::DimensionMismatch, "frame dimensions must be >= 1");
  if (channels != 1 && channels != 3) raise(ErrorCode::InvalidChannels, "channels must be 1 or 3");
}

}  // namespace

Frame::Frame(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels), index_(0) {
  check_shape(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels, 0);
}

Frame::Frame(int width, int height, int channels, std::vector<std::uint8_t> data, std::int64_t index)
    : width_(width), height_(height), channels_(channels), index_(index), data_(std::move(data)) {
  check_shape(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels)
    raise(ErrorCode::DimensionMismatch, "sample count does not match width*height*channels");
}

AlphaMatte::AlphaMatte(int width, int height, double fill)
    : width_(width), height_(height), alpha_(static_cast<std::size_t>(width) * height, std::clamp(fill, 0.0, 1.0)) {
  if (width < 1 || height < 1) raise(ErrorCode::DimensionMismatch, "matte dimensions must be >= 1");
}

AlphaMatte::AlphaMatte(int width, int height, std::vector<double> alpha)
    : width_(width), height_(height), alpha_(std::move(alpha)) {
  if (width < 1 || height < 1) raise(ErrorCode::DimensionMismatch, "matte dimensions must be >= 1");
  if (alpha_.size() != static_cast<std::size_t>(width) * height)
    raise(ErrorCode::DimensionMismatch, "alpha count does not match width*height");
  for (double a : alpha_)
    if (!(a >= 0.0 && a <= 1.0)) raise(ErrorCode::InvalidParams, "alpha outside [0,1]");
}

void AlphaMatte::set(int x, int y, double a) noexcept {
  alpha_[static_cast<std::size_t>(y) * width_ + x] = std::clamp(a, 0.0, 1.0);
}

Trimap::Trimap(int width, int height, Label fill)
    : width_(width), height_(height), labels_(static_cast<std::size_t>(width) * height, fill) {
  if (width < 1 || height < 1) raise(ErrorCode::DimensionMismatch, "trimap dimensions must be >= 1");
}

std::uint8_t to_u8(double v) noexcept {
  // std::round is half-away-from-zero.
  double r = std::round(v);
  if (!(r > 0.0)) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

Frame to_grayscale(const Frame& f) {
  if (f.channels() != 3) raise(ErrorCode::InvalidChannels, "to_grayscale expects a 3-channel frame");
  Frame out(f.width(), f.height(), 1);
  out.set_index(f.index());
  auto src = f.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    double y = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
    dst[i] = to_u8(y);
  }
  return out;
}

Frame downsample(const Frame& f, int factor) {
  if (factor < 1) raise(ErrorCode::InvalidFactor, "downsample factor must be >= 1");
  if (f.width() % factor != 0 || f.height() % factor != 0)
    raise(ErrorCode::DimensionMismatch, "frame dimensions not divisible by factor " + std::to_string(factor));
  if (factor == 1) return f;
  const int ow = f.width() / factor, oh = f.height() / factor, ch = f.channels();
  const unsigned n = static_cast<unsigned>(factor) * factor;
  Frame out(ow, oh, ch);
  out.set_index(f.index());
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x)
      for (int c = 0; c < ch; ++c) {
        unsigned sum = 0;
        for (int dy = 0; dy < factor; ++dy)
          for (int dx = 0; dx < factor; ++dx) sum += f.at(x * factor + dx, y * factor + dy, c);
        // Non-negative integer half-up == half away from zero.
        out.at(x, y, c) = static_cast<std::uint8_t>((2 * sum + n) / (2 * n));
      }
  return out;
}

Frame upsample_nearest(const Frame& f, int factor) {
  if (factor < 1) raise(ErrorCode::InvalidFactor, "upsample factor must be >= 1");
  if (factor == 1) return f;
  Frame out(f.width() * factor, f.height() * factor, f.channels());
  out.set_index(f.index());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      for (int c = 0; c < f.channels(); ++c) out.at(x, y, c) = f.at(x / factor, y / factor, c);
  return out;
}

Frame quantize(const Frame& f, int step) {
  if (step < 1 || step > 128) raise(ErrorCode::InvalidStep, "quantization step must be in [1,128]");
  if (step == 1) return f;
  Frame out = f;
  const unsigned s = static_cast<unsigned>(step);
  for (auto& v : out.data()) {
    unsigned q = (2u * v + s) / (2u * s) * s;
    v = static_cast<std::uint8_t>(std::min(255u, q));
  }
  return out;
}

std::vector<std::uint8_t> encode_pnm(const Frame& f) {
  std::string header = (f.channels() == 3 ? "P6\n" : "P5\n") + std::to_string(f.width()) + " " +
                       std::to_string(f.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), f.data().begin(), f.data().end());
  return out;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  long number() {
    skip_separators();
    std::size_t start = pos_;
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000) raise(ErrorCode::MalformedImage, "header value too large");
      ++pos_;
    }
    if (pos_ == start) raise(ErrorCode::MalformedImage, "expected a decimal header field");
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }
  bool at_space() const { return pos_ < bytes_.size() && std::isspace(bytes_[pos_]); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Frame decode_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5'))
    raise(ErrorCode::MalformedImage, "expected P6 or P5 magic");
  const int channels = bytes[1] == '6' ? 3 : 1;
  HeaderReader rd(bytes);
  if (!rd.at_space()) raise(ErrorCode::MalformedImage, "missing separator after magic");
  long w = rd.number();
  long h = rd.number();
  long maxval = rd.number();
  if (w < 1 || h < 1) raise(ErrorCode::MalformedImage, "zero image dimension");
  if (maxval != 255) raise(ErrorCode::MalformedImage, "maxval must be 255");
  if (!rd.at_space()) raise(ErrorCode::MalformedImage, "missing separator after maxval");
  rd.advance();
  const std::size_t need = static_cast<std::size_t>(w) * h * channels;
  if (bytes.size() - rd.pos() < need) raise(ErrorCode::MalformedImage, "truncated payload");
  auto payload = bytes.subspan(rd.pos(), need);
  return Frame(static_cast<int>(w), static_cast<int>(h), channels,
               std::vector<std::uint8_t>(payload.begin(), payload.end()));
}

Frame read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pnm(bytes);
}

void write_pnm(const std::filesystem::path& path, const Frame& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::Io, "cannot write " + path.string());
  auto bytes = encode_pnm(f);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(ErrorCode::Io, "short write to " + path.string());
}

Frame matte_to_frame(const AlphaMatte& m) {
  Frame out(m.width(), m.height(), 1);
  auto a = m.alpha();
  auto d = out.data();
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = to_u8(a[i] * 255.0);
  return out;
}

AlphaMatte frame_to_matte(const Frame& f) {
  if (f.channels() != 1) raise(ErrorCode::InvalidChannels, "matte frames are single-channel");
  std::vector<double> a(f.pixel_count());
  auto d = f.data();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = d[i] / 255.0;
  return AlphaMatte(f.width(), f.height(), std::move(a));
}

}  // namespace emr
