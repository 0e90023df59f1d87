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

#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "emr/raster.hpp"

namespace testing {

inline emr::Frame filled(int w, int h, int ch, std::uint8_t v) {
  emr::Frame f(w, h, ch);
  for (auto& s : f.data()) s = v;
  return f;
}

inline emr::Frame random_frame(std::mt19937_64& rng, int w, int h, int ch) {
  emr::Frame f(w, h, ch);
  for (auto& s : f.data()) s = static_cast<std::uint8_t>(rng() & 0xff);
  return f;
}

inline emr::Frame square_mask(int w, int h, int x0, int y0, int side) {
  emr::Frame m(w, h, 1);
  for (int y = y0; y < y0 + side; ++y)
    for (int x = x0; x < x0 + side; ++x) m.at(x, y) = 255;
  return m;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("emr_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
