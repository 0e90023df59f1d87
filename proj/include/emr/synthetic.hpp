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
#include <filesystem>

#include "emr/raster.hpp"

namespace emr {

struct SyntheticParams {
  int width = 64;
  int height = 64;
  int square = 8;
  double noise_sigma = 2.0;
  std::uint8_t color[3] = {220, 200, 60};
};

struct SyntheticFrame {
  Frame image;         // RGB with per-channel noise
  Frame ground_truth;  // 1 channel, 255 inside the square
};

/// Top-left corner of the square at frame t; moves one pixel per axis per
/// frame and bounces off the borders.
void square_position(const SyntheticParams& p, std::int64_t t, int& x, int& y);

/// Noise-free static background (smooth gradient in [40,120]).
Frame synthetic_background(const SyntheticParams& p);

/// Frame t of the sequence for a given seed; frames are independent of the
/// order they are generated in.
SyntheticFrame synthetic_frame(const SyntheticParams& p, std::uint64_t seed, std::int64_t t);

/// Target scene used for fusion (a coarse checkerboard).
Frame synthetic_scene(const SyntheticParams& p);

/// Writes frame_%06d.ppm, gt_%06d.pgm, background.ppm and emr.cfg into dir.
void write_synthetic(const std::filesystem::path& dir, int frames, std::uint64_t seed,
                     const SyntheticParams& p = {});

}  // namespace emr
