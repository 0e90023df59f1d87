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

#include <cmath>

#include "doctest.h"
#include "emr/error.hpp"
#include "emr/layering.hpp"
#include "oracles/frozen_values.hpp"
#include "unit/helpers.hpp"

using namespace emr;

namespace {

// Opening by its set definition: a pixel survives iff some 3x3 window lying
// fully inside the frame and fully set contains it.
Frame opening_oracle(const Frame& m) {
  Frame out(m.width(), m.height(), 1);
  for (int cy = 1; cy + 1 < m.height(); ++cy)
    for (int cx = 1; cx + 1 < m.width(); ++cx) {
      bool full = true;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) full = full && m.at(cx + dx, cy + dy) == 255;
      if (!full) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) out.at(cx + dx, cy + dy) = 255;
    }
  return out;
}

void check_model_invariants(const LayerModel& m) {
  const GmmParams& p = m.params();
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      const int n = m.component_count(x, y);
      REQUIRE(n >= 1);
      REQUIRE(n <= p.max_components);
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        sum += m.component(x, y, k).weight;
        REQUIRE(m.component(x, y, k).variance >= p.var_min);
      }
      REQUIRE(std::abs(sum - 1.0) <= 1e-9);
    }
}

}  // namespace

TEST_CASE("layer_init and first classification") {
  std::mt19937_64 rng(11);
  const Frame f = testing::random_frame(rng, 12, 10, 3);
  LayerModel m = layer_init(f, {});
  CHECK(count_foreground(m.classify(f)) == 0);

  Frame g = testing::random_frame(rng, 12, 10, 1);
  for (auto& s : g.data()) s = static_cast<std::uint8_t>(s % 100);
  LayerModel mg = layer_init(g, {});
  Frame shifted = g;
  shifted.at(4, 3) += 100;
  const Frame mask = mg.classify(shifted);
  CHECK(count_foreground(mask) == 1);
  CHECK(mask.at(4, 3) == 255);
  CHECK(100.0 > oracle::kGmmMatchHalfWidth);

  GmmParams bad;
  bad.background_weight = 0.0;
  CHECK_THROWS_AS(layer_init(f, bad), Error);
  for (auto mutate : {+[](GmmParams& p) { p.max_components = 0; }, +[](GmmParams& p) { p.match_sigmas = 0; },
                      +[](GmmParams& p) { p.learning_rate = 1.5; }, +[](GmmParams& p) { p.var_min = 0; },
                      +[](GmmParams& p) { p.var_init = 1; }, +[](GmmParams& p) { p.background_weight = 1.1; }}) {
    GmmParams p;
    mutate(p);
    try {
      p.validate();
      FAIL("expected InvalidParams");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidParams);
    }
  }
}

TEST_CASE("single pixel update examples") {
  const Frame f(1, 1, 1, {50});
  LayerModel m(f, {});
  CHECK(m.update_classify(f).at(0, 0) == 0);
  CHECK(m.component_count(0, 0) == 1);
  CHECK(m.component(0, 0, 0).mean[0] == 50.0);
  CHECK(m.component(0, 0, 0).variance == doctest::Approx(oracle::kGmmVarAfterMatch));
  CHECK(m.component(0, 0, 0).weight == 1.0);
  // repeated matches decay the variance down to the floor
  for (int i = 0; i < 2000; ++i) m.update_classify(f);
  CHECK(m.component(0, 0, 0).variance == 4.0);

  LayerModel n(f, {});
  CHECK(n.update_classify(Frame(1, 1, 1, {200})).at(0, 0) == 255);
  REQUIRE(n.component_count(0, 0) == 2);
  CHECK(n.component(0, 0, 0).weight == doctest::Approx(oracle::kGmmOldWeightAfterMiss));
  CHECK(n.component(0, 0, 1).weight == doctest::Approx(oracle::kGmmNewWeightAfterMiss));
  CHECK(n.component(0, 0, 1).mean[0] == 200.0);
  CHECK(n.component(0, 0, 1).variance == 225.0);
}

TEST_CASE("full mixture replaces its lowest-weight component") {
  GmmParams p;
  p.max_components = 2;
  LayerModel m(Frame(1, 1, 1, {10}), p);
  m.update_classify(Frame(1, 1, 1, {100}));
  m.update_classify(Frame(1, 1, 1, {200}));
  REQUIRE(m.component_count(0, 0) == 2);
  CHECK(m.component(0, 0, 0).mean[0] == 10.0);
  CHECK(m.component(0, 0, 1).mean[0] == 200.0);
}

TEST_CASE("zero learning rate is a pure classifier") {
  GmmParams p;
  p.learning_rate = 0.0;
  std::mt19937_64 rng(12);
  const Frame first = testing::random_frame(rng, 9, 7, 3);
  LayerModel m(first, p);
  const LayerModel before = m;
  for (int i = 0; i < 5; ++i) {
    const Frame f = testing::random_frame(rng, 9, 7, 3);
    CHECK(m.update_classify(f) == m.classify(f));
    CHECK(m == before);
  }
}

TEST_CASE("weights and variances stay valid") {
  std::mt19937_64 rng(13);
  for (double lr : {0.02, 0.3, 1.0}) {
    GmmParams p;
    p.learning_rate = lr;
    LayerModel m(testing::random_frame(rng, 8, 8, 3), p);
    for (int i = 0; i < 40; ++i) {
      m.update_classify(testing::random_frame(rng, 8, 8, 3));
      check_model_invariants(m);
    }
  }
}

TEST_CASE("stationarity: repeated frames never grow the foreground") {
  std::mt19937_64 rng(14);
  LayerModel m(testing::random_frame(rng, 16, 16, 3), {});
  const Frame f = testing::random_frame(rng, 16, 16, 3);
  std::size_t prev = count_foreground(m.update_classify(f));
  for (int i = 0; i < 60; ++i) {
    const std::size_t now = count_foreground(m.update_classify(f));
    CHECK(now <= prev);
    prev = now;
  }
  CHECK(prev == 0);
}

TEST_CASE("dimension mismatch") {
  LayerModel m(Frame(4, 4, 3), {});
  CHECK_THROWS_AS(m.update_classify(Frame(4, 5, 3)), Error);
  CHECK_THROWS_AS(m.classify(Frame(4, 4, 1)), Error);
}

TEST_CASE("mask_postprocess") {
  CHECK(mask_postprocess(Frame(8, 8, 1)) == Frame(8, 8, 1));
  Frame dot(8, 8, 1);
  dot.at(4, 4) = 255;
  CHECK(count_foreground(mask_postprocess(dot)) == 0);
  const Frame sq = testing::square_mask(32, 32, 12, 12, 8);
  CHECK(mask_postprocess(sq) == sq);
  CHECK(oracle::kOpeningKeepsSquare == 1);
  // a 2-wide strip on the border has no full 3x3 neighbourhood
  CHECK(count_foreground(mask_postprocess(testing::square_mask(8, 8, 0, 0, 2))) == 0);
  CHECK(count_foreground(mask_postprocess(testing::square_mask(8, 8, 0, 0, 3))) == 9);

  Frame bad(2, 2, 1);
  bad.at(0, 0) = 7;
  try {
    mask_postprocess(bad);
    FAIL("expected InvalidMask");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidMask);
  }

  std::mt19937_64 rng(15);
  for (int t = 0; t < 200; ++t) {
    const int w = 1 + static_cast<int>(rng() % 14), h = 1 + static_cast<int>(rng() % 14);
    Frame m(w, h, 1);
    for (auto& s : m.data()) s = rng() % 3 ? 255 : 0;
    REQUIRE(mask_postprocess(m) == opening_oracle(m));
  }
}
