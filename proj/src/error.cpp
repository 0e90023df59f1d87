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

#include "emr/error.hpp"

namespace emr {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidChannels: return "InvalidChannels";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidFactor: return "InvalidFactor";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::MalformedImage: return "MalformedImage";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidMask: return "InvalidMask";
    case ErrorCode::InvalidRadii: return "InvalidRadii";
    case ErrorCode::InsufficientLabels: return "InsufficientLabels";
    case ErrorCode::InvalidTransform: return "InvalidTransform";
    case ErrorCode::NoViews: return "NoViews";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::InvalidChannel: return "InvalidChannel";
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::NoLevels: return "NoLevels";
    case ErrorCode::GroupTooSmall: return "GroupTooSmall";
    case ErrorCode::InvalidKey: return "InvalidKey";
    case ErrorCode::UnauthorizedAgent: return "UnauthorizedAgent";
    case ErrorCode::ReseedRequired: return "ReseedRequired";
    case ErrorCode::TamperAlarm: return "TamperAlarm";
    case ErrorCode::ReplayAlarm: return "ReplayAlarm";
    case ErrorCode::MalformedEnvelope: return "MalformedEnvelope";
    case ErrorCode::DegenerateTemplate: return "DegenerateTemplate";
    case ErrorCode::ShardUnavailable: return "ShardUnavailable";
    case ErrorCode::InvalidShardCount: return "InvalidShardCount";
    case ErrorCode::InvalidPayload: return "InvalidPayload";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace emr
