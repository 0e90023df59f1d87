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

#include <stdexcept>
#include <string>
#include <string_view>

namespace emr {

/// Every failure the core can raise. The numeric values are mirrored by the
/// C API status codes in emr.h, so do not reorder.
enum class ErrorCode : int {
  // raster
  InvalidChannels = 1,
  DimensionMismatch,
  InvalidFactor,
  InvalidStep,
  MalformedImage,
  // layering / matting
  InvalidParams,
  InvalidMask,
  InvalidRadii,
  InsufficientLabels,
  // fusion
  InvalidTransform,
  NoViews,
  // qoe-qos
  InvalidModel,
  InvalidChannel,
  InvalidBounds,
  NoLevels,
  // tunnel
  GroupTooSmall,
  InvalidKey,
  UnauthorizedAgent,
  ReseedRequired,
  TamperAlarm,
  ReplayAlarm,
  MalformedEnvelope,
  // knowledge store
  DegenerateTemplate,
  ShardUnavailable,
  InvalidShardCount,
  // netsim
  InvalidPayload,
  // config / io
  UnknownKey,
  InvalidValue,
  MissingKey,
  Io,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace emr
