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

#include <algorithm>
#include <string>

#include "doctest.h"
#include "emr/error.hpp"
#include "emr/raster.hpp"
#include "oracles/frozen_values.hpp"
#include "unit/helpers.hpp"

using namespace emr;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("frame construction checks shape") {
  CHECK(code_of([] { Frame(2, 2, 2); }) == ErrorCode::InvalidChannels);
  CHECK(code_of([] { Frame(2, 2, 3, std::vector<std::uint8_t>(5)); }) == ErrorCode::DimensionMismatch);
  CHECK(Frame(1, 1, 1, {100}).at(0, 0) == 100);  // a single braced sample is pixel data
  Frame f(3, 2, 3);
  f.set_index(7);
  CHECK(f.data().size() == 18);
  CHECK(f.index() == 7);
}

TEST_CASE("to_grayscale") {
  CHECK(to_grayscale(testing::filled(4, 4, 3, 0)) == testing::filled(4, 4, 1, 0));
  CHECK(to_grayscale(testing::filled(4, 4, 3, 255)) == testing::filled(4, 4, 1, 255));
  Frame red(1, 1, 3, {255, 0, 0});
  CHECK(to_grayscale(red).at(0, 0) == oracle::kGrayRed);
  CHECK(code_of([] { to_grayscale(Frame(1, 1, 1)); }) == ErrorCode::InvalidChannels);

  Frame idx(2, 2, 3);
  idx.set_index(42);
  CHECK(to_grayscale(idx).index() == 42);

  std::mt19937_64 rng(3);
  const Frame f = testing::random_frame(rng, 16, 16, 3);
  const Frame g = to_grayscale(f);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) {
      const auto lo = std::min({f.at(x, y, 0), f.at(x, y, 1), f.at(x, y, 2)});
      const auto hi = std::max({f.at(x, y, 0), f.at(x, y, 1), f.at(x, y, 2)});
      CHECK(g.at(x, y) >= lo);
      CHECK(g.at(x, y) <= hi);
    }
}

TEST_CASE("downsample") {
  std::mt19937_64 rng(1);
  const Frame f = testing::random_frame(rng, 6, 4, 3);
  CHECK(downsample(f, 1) == f);
  Frame block(2, 2, 1, {10, 20, 30, 40});
  const Frame d = downsample(block, 2);
  CHECK(d.width() == 1);
  CHECK(d.at(0, 0) == oracle::kBlockMean);
  CHECK(code_of([] { downsample(Frame(3, 3, 1), 2); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { downsample(f, 0); }) == ErrorCode::InvalidFactor);
  // half rounds away from zero: {0,0,0,2} -> 0.5 -> 1
  CHECK(downsample(Frame(2, 2, 1, {0, 0, 0, 2}), 2).at(0, 0) == 1);
}

TEST_CASE("upsample_nearest inverts downsample shape") {
  Frame f(2, 1, 1, {5, 9});
  const Frame u = upsample_nearest(f, 3);
  CHECK(u.width() == 6);
  CHECK(u.height() == 3);
  CHECK(u.at(2, 2) == 5);
  CHECK(u.at(3, 0) == 9);
  CHECK(downsample(u, 3) == f);
}

TEST_CASE("quantize") {
  std::mt19937_64 rng(2);
  const Frame f = testing::random_frame(rng, 7, 5, 3);
  CHECK(quantize(f, 1) == f);
  CHECK(quantize(Frame(1, 1, 1, {100}), 32).at(0, 0) == oracle::kQuant100Step32);
  CHECK(quantize(Frame(1, 1, 1, {255}), 2).at(0, 0) == oracle::kQuant255Step2);
  CHECK(code_of([&] { quantize(f, 0); }) == ErrorCode::InvalidStep);
  CHECK(code_of([&] { quantize(f, 129); }) == ErrorCode::InvalidStep);
  for (int step = 1; step <= 128; ++step) {
    const Frame q = quantize(f, step);
    CHECK(quantize(q, step) == q);
  }
}

TEST_CASE("pnm codec") {
  auto minimal = bytes_of("P6 2 1 255 ");
  for (std::uint8_t b : {1, 2, 3, 4, 5, 6}) minimal.push_back(b);
  const Frame f = decode_pnm(minimal);
  CHECK(f.width() == 2);
  CHECK(f.height() == 1);
  CHECK(f.channels() == 3);
  CHECK(f.at(1, 0, 2) == 6);

  auto pgm = bytes_of("P5\n# comment\n1 2\n255\n");
  pgm.push_back(7);
  pgm.push_back(8);
  const Frame g = decode_pnm(pgm);
  CHECK(g.channels() == 1);
  CHECK(g.at(0, 1) == 8);

  auto truncated = bytes_of("P6 2 1 255 ");
  truncated.push_back(1);
  CHECK(code_of([&] { decode_pnm(truncated); }) == ErrorCode::MalformedImage);
  CHECK(code_of([] { decode_pnm(bytes_of("P3 1 1 255 000")); }) == ErrorCode::MalformedImage);
  CHECK(code_of([] { decode_pnm(bytes_of("P5 1 1 65535 xx")); }) == ErrorCode::MalformedImage);
  CHECK(code_of([] { decode_pnm(bytes_of("P5 1 1 255")); }) == ErrorCode::MalformedImage);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const int w = 1 + static_cast<int>(rng() % 17), h = 1 + static_cast<int>(rng() % 9);
    const int ch = rng() % 2 ? 3 : 1;
    const Frame r = testing::random_frame(rng, w, h, ch);
    CHECK(decode_pnm(encode_pnm(r)) == r);
  }
}

TEST_CASE("pnm files") {
  const auto dir = testing::scratch_dir("raster");
  std::mt19937_64 rng(5);
  const Frame f = testing::random_frame(rng, 5, 3, 3);
  write_pnm(dir / "a.ppm", f);
  CHECK(read_pnm(dir / "a.ppm") == f);
  CHECK(code_of([&] { read_pnm(dir / "missing.ppm"); }) == ErrorCode::Io);
  std::filesystem::remove_all(dir);
}

TEST_CASE("matte quantization") {
  AlphaMatte m(2, 1, std::vector<double>{0.0, 0.5});
  const Frame q = matte_to_frame(m);
  CHECK(q.at(0, 0) == 0);
  CHECK(q.at(1, 0) == 128);
  CHECK(frame_to_matte(q).at(1, 0) == doctest::Approx(128.0 / 255.0));
  CHECK(code_of([] { AlphaMatte(1, 1, std::vector<double>{1.5}); }) == ErrorCode::InvalidParams);
}
