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
#include "emr/qoe.hpp"
#include "oracles/frozen_values.hpp"
#include "oracles/qoe_oracle.hpp"
#include "unit/helpers.hpp"

using namespace emr;

namespace {

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

TEST_CASE("mos_of") {
  const MosModel m{1e6, 8e6};
  CHECK(mos_of(0.0, 1.0, m) == 1.0);
  CHECK(mos_of(8e6, 1.0, m) == doctest::Approx(5.0));
  CHECK(mos_of(3e6, 1.0, m) == doctest::Approx(oracle::kMosExample).epsilon(1e-12));
  CHECK(mos_of(1e9, 1.0, m) == 5.0);
  CHECK(code_of([] { mos_of(1.0, 1.0, {0.0, 1.0}); }) == ErrorCode::InvalidModel);
  CHECK(code_of([] { mos_of(1.0, 1.0, {2.0, 1.0}); }) == ErrorCode::InvalidModel);
  double prev = 0.0;
  for (double b = 0; b < 2e7; b += 1.3e5) {
    const double now = mos_of(b, 1.0, m);
    CHECK(now >= prev);
    prev = now;
  }
}

TEST_CASE("latency_of and score") {
  const ChannelModel ch{1e7, 0.01, 0.0};
  CHECK(latency_of({"z", 1, 1, 0.0}, ch) == 0.01);
  CHECK(latency_of({"x", 1, 1, 1e6}, ch) == doctest::Approx(oracle::kLatencyExample));
  CHECK(code_of([] { latency_of({"x", 1, 1, 1.0}, {0.0, 0.0, 0.0}); }) == ErrorCode::InvalidChannel);

  // bits chosen so latency lands on the bounds
  const QoeQosScore at_max = score({"a", 1, 1, 4e6}, ch, 1.0, {1e6, 8e6}, {0.01, 0.41});
  CHECK(at_max.qos_norm == doctest::Approx(0.0));
  const QoeQosScore at_min = score({"b", 1, 1, 0.0}, ch, 1.0, {1e6, 8e6}, {0.01, 0.41});
  CHECK(at_min.qos_norm == 1.0);
  const QoeQosScore mid = score({"c", 1, 1, 3e6}, ch, 1.0, {1e6, 8e6}, {0.0, 1.0});
  CHECK(mid.qoe_norm == doctest::Approx(oracle::kQoeNormExample).epsilon(1e-12));
  CHECK(code_of([&] { score({"c", 1, 1, 1.0}, ch, 1.0, {1e6, 8e6}, {0.5, 0.5}); }) == ErrorCode::InvalidBounds);
}

TEST_CASE("estimate_bits_per_frame") {
  CHECK(estimate_bits_per_frame(64, 64, 3, 1, 1) == oracle::kBitsFull64);
  CHECK(estimate_bits_per_frame(64, 64, 3, 2, 4) == oracle::kBitsHalf64);
  CHECK(estimate_bits_per_frame(64, 64, 3, 4, 16) == oracle::kBitsQuarter64);
}

TEST_CASE("select_encoding examples") {
  const std::vector<EncodingLevel> abc = {{"A", 1, 1, 1e6}, {"B", 1, 1, 4e6}, {"C", 1, 1, 8e6}};
  const ChannelModel ch{1e7, 0.01, 0.0};
  const MosModel m{1e6, 8e6};
  const Selection s = select_encoding(abc, ch, 1.0, m, Policy::OptimalQoe, 0.5, {1.0, 0.5}, {0.0, 0.5});
  CHECK(s.index == static_cast<std::size_t>(oracle::kSelectExampleIndex));
  CHECK_FALSE(s.degraded);
  CHECK(s.score.latency == doctest::Approx(oracle::kSelectExampleLatency));

  // single level: degraded iff it violates the constraint
  const std::vector<EncodingLevel> one = {{"C", 1, 1, 8e6}};
  CHECK(select_encoding(one, ch, 1.0, m, Policy::OptimalQoe, 0.5, {1.0, 0.5}, {0.0, 0.5}).degraded);
  CHECK_FALSE(select_encoding(one, ch, 1.0, m, Policy::OptimalQoe, 0.5, {1.0, 0.9}, {0.0, 0.9}).degraded);
  CHECK_FALSE(select_encoding(one, ch, 1.0, m, Policy::Balance, 0.5, {1.0, 0.5}, {0.0, 0.5}).degraded);

  // infeasible set falls back to the cheapest level
  const Selection fb = select_encoding(abc, ch, 1.0, m, Policy::OptimalQos, 0.5, {5.5, 0.5}, {0.0, 0.5});
  CHECK(fb.degraded);
  CHECK(fb.index == 0);

  CHECK(code_of([&] {
          select_encoding(std::vector<EncodingLevel>{}, ch, 1.0, m, Policy::Balance, 0.5, {}, {});
        }) == ErrorCode::NoLevels);
}

TEST_CASE("select_encoding matches the exhaustive oracle") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 300; ++t) {
    const oracle::RandomSet s = oracle::random_set(rng);
    for (Policy p : {Policy::OptimalQoe, Policy::OptimalQos, Policy::Balance}) {
      const Selection got = select_encoding(s.levels, s.channel, s.fps, s.model, p, s.w, s.constraints, s.bounds);
      const auto want = oracle::select(s.levels, s.channel, s.fps, s.model, p, s.w, s.constraints, s.bounds);
      REQUIRE(got.index == want.first);
      REQUIRE(got.degraded == want.second);
    }
    // BALANCE with w=1 picks the same MOS as unconstrained OPT_QOE
    const Selection bal = select_encoding(s.levels, s.channel, s.fps, s.model, Policy::Balance, 1.0, s.constraints,
                                          s.bounds);
    const Selection qoe = select_encoding(s.levels, s.channel, s.fps, s.model, Policy::OptimalQoe, 0.0,
                                          {1.0, 1e300}, s.bounds);
    CHECK(bal.score.mos == qoe.score.mos);
  }
}

TEST_CASE("reencode") {
  std::mt19937_64 rng(42);
  const Frame f = testing::random_frame(rng, 8, 8, 3);
  CHECK(reencode(f, {"id", 1, 1, 1.0}) == f);
  const Frame r = reencode(Frame(2, 2, 1, {10, 20, 30, 40}), {"l", 2, 32, 1.0});
  CHECK(r.at(0, 0) == oracle::kReencodeBlock);
  CHECK(code_of([&] { reencode(Frame(3, 3, 1), {"l", 2, 1, 1.0}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("policy names") {
  CHECK(parse_policy("qoe") == Policy::OptimalQoe);
  CHECK(parse_policy("qos") == Policy::OptimalQos);
  CHECK(std::string(policy_name(parse_policy("balance"))) == "balance");
  CHECK(code_of([] { parse_policy("best"); }) == ErrorCode::InvalidValue);
}
