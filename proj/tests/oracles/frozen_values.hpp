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

// Generated by tests/oracles/derive.py. Do not edit by hand.
#pragma once

namespace oracle {

inline constexpr long long kGrayRed = 76;
inline constexpr long long kBlockMean = 25;
inline constexpr long long kQuant100Step32 = 96;
inline constexpr long long kQuant255Step2 = 255;
inline constexpr long long kReencodeBlock = 32;
inline constexpr double kGmmVarAfterMatch = 220.5;
inline constexpr double kGmmOldWeightAfterMiss = 0.98;
inline constexpr double kGmmNewWeightAfterMiss = 0.02;
inline constexpr double kGmmMatchHalfWidth = 37.5;
inline constexpr long long kTrimapFg = 16;
inline constexpr long long kTrimapBg = 768;
inline constexpr long long kTrimapUnknown = 240;
inline constexpr long long kTrimapFgX0 = 14;
inline constexpr long long kTrimapFgY0 = 14;
inline constexpr long long kTrimapFgX1 = 17;
inline constexpr long long kTrimapFgY1 = 17;
inline constexpr long long kOpeningKeepsSquare = 1;
inline constexpr double kAlphaMid = 0.5019607843137255;
inline constexpr double kFuzzyExample = 0.5;
inline constexpr long long kComposeHalf = 150;
inline constexpr double kMosExample = 3.5237190142858297;
inline constexpr double kQoeNormExample = 0.6309297535714574;
inline constexpr double kLatencyExample = 0.11;
inline constexpr long long kSelectExampleIndex = 1;
inline constexpr double kSelectExampleLatency = 0.41000000000000003;
inline constexpr long long kToyPubA = 8;
inline constexpr long long kToyPubB = 19;
inline constexpr long long kToyShared = 2;
inline constexpr long long kDesk61GeneratorOk = 1;
inline constexpr const char* kToyFingerprint8 = "beead77994cf573341ec17b58bbf7eb34d2711c993c1d976b128b3188dc1829a";
inline constexpr const char* kDeskFingerprint2 = "cd04a4754498e06db5a13c5f371f1f04ff6d2470f24aa9bd886540e5dce77f70";
inline constexpr const char* kSha256Abc = "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";
inline constexpr long long kKeystreamFirstByte = 255;
inline constexpr double kArrivalExample = 0.11;
inline constexpr long long kShardAlice4 = 3;
inline constexpr long long kShardBob4 = 2;
inline constexpr long long kShardCarol3 = 2;
inline constexpr long long kBitsFull64 = 98304;
inline constexpr long long kBitsHalf64 = 21504;
inline constexpr long long kBitsQuarter64 = 3840;
inline constexpr const char* kPipelineLevel = "full";
inline constexpr double kPipelineMos = 4.976876828577375;
inline constexpr double kPipelineLatency = 0.059152;
inline constexpr long long kPipelineWireBytes = 12401;
inline constexpr double kPipelineTransportMs = 59.604000000000006;

}  // namespace oracle
