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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "emr/config.hpp"

namespace emr {

/// Receiver/sender stages, numbered in workflow order.
enum class Stage : int {
  Encode = 1,     // select_encoding + reencode
  Encrypt = 2,
  Transmit = 3,   // adversary + link
  Verify = 4,     // decrypt_verify
  Layer = 5,      // layer_update_classify + mask_postprocess
  Matte = 6,      // trimap + alpha_solve + fuzzy_update
  Identify = 7,
  Fuse = 8,       // place_layer + compose
  Emit = 9,       // write output + metrics record
};

const char* stage_name(Stage s) noexcept;

struct StageEvent {
  std::int64_t frame = 0;
  Stage stage = Stage::Encode;
};

struct FrameMetrics {
  std::int64_t frame = 0;
  std::string level = "-";
  double mos = 0.0;
  double latency = 0.0;
  bool degraded = false;
  int tamper = 0;
  int replay = 0;
  int unauth = 0;
  bool drop = false;
  std::size_t fg_pixels = 0;
  std::string identity = "-";
  double transport_ms = 0.0;               // simulated capture-to-arrival time
  std::array<double, 9> stage_ms{};        // wall clock per stage
  bool output_written = false;
  std::string error;                        // why the frame was skipped, if it was

  double wall_ms() const noexcept;
};

struct RunOptions {
  /// Report measured wall-clock time in the ms_total column instead of the
  /// simulated transport time. Breaks byte-identical reruns.
  bool wall_clock_metrics = false;
  /// Write stage_trace.log and run.log next to the outputs.
  bool write_logs = true;
};

struct RunResult {
  std::vector<FrameMetrics> records;
  std::vector<StageEvent> trace;
  std::vector<std::string> log;
  std::string selected_view;
  std::size_t outputs_written = 0;
};

/// Runs the whole workflow over every frame_NNNNNN.ppm of the selected view.
/// Per-frame failures are logged and the frame skipped; I/O failures on the
/// output side throw Error(Io).
RunResult run_pipeline(const PipelineConfig& cfg, const RunOptions& options = {});

inline constexpr const char* kMetricsHeader =
    "frame,level,mos,latency,degraded,tamper,replay,unauth,drop,fg_pixels,identity,ms_total";

std::string emit_metrics(std::span<const FrameMetrics> records, bool wall_clock = false);

/// Frame files of a directory in index order.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

}  // namespace emr
