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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace emr {

using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 (OpenSSL EVP).
Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view text);

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Throws InvalidValue on malformed hex.
std::vector<std::uint8_t> from_hex(std::string_view hex);

std::uint64_t load_be64(const std::uint8_t* p) noexcept;
void store_be64(std::uint64_t v, std::uint8_t* p) noexcept;
void store_be32(std::uint32_t v, std::uint8_t* p) noexcept;
std::uint32_t load_be32(const std::uint8_t* p) noexcept;

}  // namespace emr
