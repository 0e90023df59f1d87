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

#include "emr/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "emr/error.hpp"
#include "emr/prng.hpp"

namespace emr {

namespace {

int bounce(std::int64_t t, int start, int range) {
  if (range <= 0) return 0;
  const std::int64_t period = 2 * static_cast<std::int64_t>(range);
  const std::int64_t s = (start + t) % period;
  return static_cast<int>(s <= range ? s : period - s);
}

}  // namespace

void square_position(const SyntheticParams& p, std::int64_t t, int& x, int& y) {
  x = bounce(t, 5, p.width - p.square);
  y = bounce(t, 20, p.height - p.square);
}

Frame synthetic_background(const SyntheticParams& p) {
  Frame f(p.width, p.height, 3);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      const double u = p.width > 1 ? static_cast<double>(x) / (p.width - 1) : 0.0;
      const double v = p.height > 1 ? static_cast<double>(y) / (p.height - 1) : 0.0;
      f.at(x, y, 0) = to_u8(40.0 + 80.0 * u);
      f.at(x, y, 1) = to_u8(40.0 + 80.0 * v);
      f.at(x, y, 2) = to_u8(80.0 + 40.0 * (u - v));
    }
  return f;
}

SyntheticFrame synthetic_frame(const SyntheticParams& p, std::uint64_t seed, std::int64_t t) {
  if (p.width < p.square || p.height < p.square || p.square < 1) raise(ErrorCode::InvalidParams, "square does not fit");
  Rng rng(mix_seed(seed, 1000 + static_cast<std::uint64_t>(t)));
  SyntheticFrame out{synthetic_background(p), Frame(p.width, p.height, 1)};
  out.image.set_index(t);
  out.ground_truth.set_index(t);
  int sx, sy;
  square_position(p, t, sx, sy);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      const bool inside = x >= sx && x < sx + p.square && y >= sy && y < sy + p.square;
      if (inside) out.ground_truth.at(x, y) = 255;
      for (int c = 0; c < 3; ++c) {
        const double base = inside ? p.color[c] : out.image.at(x, y, c);
        out.image.at(x, y, c) = to_u8(base + p.noise_sigma * rng.normal());
      }
    }
  return out;
}

Frame synthetic_scene(const SyntheticParams& p) {
  Frame f(p.width, p.height, 3);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      const bool dark = ((x / 8) + (y / 8)) % 2 == 0;
      f.at(x, y, 0) = dark ? 30 : 170;
      f.at(x, y, 1) = dark ? 60 : 190;
      f.at(x, y, 2) = dark ? 90 : 210;
    }
  return f;
}

void write_synthetic(const std::filesystem::path& dir, int frames, std::uint64_t seed, const SyntheticParams& p) {
  if (frames < 0) raise(ErrorCode::InvalidParams, "frame count must be >= 0");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!std::filesystem::is_directory(dir)) raise(ErrorCode::Io, "cannot create " + dir.string());
  char name[32];
  for (int t = 0; t < frames; ++t) {
    const SyntheticFrame f = synthetic_frame(p, seed, t);
    std::snprintf(name, sizeof name, "frame_%06d.ppm", t);
    write_pnm(dir / name, f.image);
    std::snprintf(name, sizeof name, "gt_%06d.pgm", t);
    write_pnm(dir / name, f.ground_truth);
  }
  write_pnm(dir / "background.ppm", synthetic_scene(p));
  std::ofstream cfg(dir / "emr.cfg");
  cfg << "# generated sequence, seed " << seed << "\n"
      << "seed = " << seed << "\n\n"
      << "[input]\nframes_dir = .\nbackground = background.ppm\nfps = 30\n\n"
      << "[output]\ndir = out\n\n"
      << "[channel]\ncapacity = 2000000\nbase_delay = 0.01\nloss_prob = 0.02\n\n"
      << "[qoe]\npolicy = balance\nw = 0.5\n";
  if (!cfg) raise(ErrorCode::Io, "cannot write emr.cfg");
}

}  // namespace emr
