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
#include <optional>
#include <string>
#include <vector>

#include "emr/fusion.hpp"
#include "emr/layering.hpp"
#include "emr/matting.hpp"
#include "emr/netsim.hpp"
#include "emr/qoe.hpp"
#include "emr/tunnel.hpp"

namespace emr {

/// An encoding level as written in the config; zero bits means "estimate
/// from the frame geometry".
struct LevelSpec {
  std::string id;
  int scale_factor = 1;
  int quant_step = 1;
  double bits_per_frame = 0.0;
};

struct PipelineConfig {
  std::uint64_t seed = 1;

  // [input]
  std::filesystem::path frames_dir;
  std::filesystem::path background;
  double fps = 30.0;
  std::vector<ViewSource> views;  // empty: a single frontal view over frames_dir
  double target_angle = 0.0;

  // [output]
  std::filesystem::path output_dir = "out";
  std::filesystem::path metrics_path;  // empty: <output_dir>/metrics.csv

  // [encoding], [channel], [qoe]
  std::vector<LevelSpec> levels = {{"full", 1, 1, 0.0}, {"half", 2, 4, 0.0}, {"quarter", 4, 16, 0.0}};
  ChannelModel channel{2e6, 0.01, 0.0};
  Policy policy = Policy::Balance;
  double balance_w = 0.5;
  SelectionConstraints constraints{3.0, 0.1};
  double latency_min = 0.0;
  MosModel mos{2e5, 3e6};

  // [tunnel]
  DhGroup group = DhGroup::desk61();
  std::optional<std::uint64_t> sender_seed;
  std::optional<std::uint64_t> receiver_seed;
  ChaosParams chaos;
  std::vector<Digest> extra_trusted;

  // [adversary]
  AdversaryMode adversary = AdversaryMode::None;
  int adversary_period = 1;

  // [gmm], [matting]
  GmmParams gmm;
  int r_fg = 2;
  int r_bg = 4;
  MattingParams matting;
  double fuzzy_rate = 0.2;

  // [store]
  std::size_t shard_count = 4;
  double theta = 0.35;
  std::optional<std::filesystem::path> store_dir;
  std::optional<std::string> enroll_user;
  int enroll_frames = 1;

  // [scene]
  LayerTransform transform;
  double depth = 1.0;

  /// Non-fatal parser notes (duplicate keys).
  std::vector<std::string> warnings;

  std::filesystem::path resolved_metrics_path() const;
};

/// Parses the key=value format. `[section]` headers prefix the keys that
/// follow with "section."; `#` starts a comment; a repeated key keeps its
/// last value and records a warning. Relative paths resolve against
/// base_dir. Every module precondition is checked here.
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

PipelineConfig load_config(const std::filesystem::path& path);

/// Checks that referenced input paths exist (InvalidValue otherwise).
void validate_paths(const PipelineConfig& cfg);

/// Documented template listing every key with its default.
std::string config_template();

}  // namespace emr
