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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "emr/raster.hpp"

namespace emr {

inline constexpr std::size_t kTemplateSide = 16;
inline constexpr std::size_t kTemplateDim = kTemplateSide * kTemplateSide;

using TemplateVector = std::array<double, kTemplateDim>;

/// Grayscale, nearest-neighbour resize to 16x16, zero mean, unit L2 norm.
/// DegenerateTemplate for constant regions; DimensionMismatch below 16x16.
TemplateVector extract_template(const Frame& face_region);

struct IdentityTemplate {
  std::string user_id;
  TemplateVector centroid{};
  std::uint64_t sample_count = 0;

  friend bool operator==(const IdentityTemplate&, const IdentityTemplate&) = default;
};

struct KnowledgeShard {
  std::size_t node_id = 0;
  bool online = true;
  std::map<std::string, IdentityTemplate> templates;
};

/// Shard routing: first 8 bytes of SHA-256(user_id), big-endian, mod N.
std::size_t shard_of(const std::string& user_id, std::size_t shard_count);

struct Identification {
  std::optional<std::string> user_id;  // empty when UNKNOWN
  double distance = 1.0;               // best cosine distance seen (1 when store is empty)
};

double cosine_distance(const TemplateVector& a, const TemplateVector& b) noexcept;

/// Hash-sharded identification store.
///
/// Mutations copy the affected shard and publish it atomically; identify
/// gathers the shard snapshots that are current at call time, so concurrent
/// enrolments never expose a half-updated shard.
class KnowledgeStore {
 public:
  explicit KnowledgeStore(std::size_t shard_count);
  KnowledgeStore(const KnowledgeStore& other);
  KnowledgeStore& operator=(const KnowledgeStore& other);

  std::size_t shard_count() const;

  /// Incremental centroid update: c <- (n c + t) / (n + 1).
  void enroll(const std::string& user_id, const TemplateVector& t);
  /// Argmin cosine distance over all online shards; UNKNOWN above theta.
  Identification identify(const TemplateVector& t, double theta) const;
  /// Reassigns every template to shard_of(user_id, n).
  void rebalance(std::size_t n);

  void set_online(std::size_t node, bool online);

  std::vector<KnowledgeShard> snapshot() const;
  std::vector<IdentityTemplate> all_templates() const;
  std::size_t user_count() const;

  /// One file per shard: shard_NNN.csv with `user_id,sample_count,v0,...,v255`.
  void save(const std::filesystem::path& dir) const;
  static KnowledgeStore load(const std::filesystem::path& dir);

 private:
  using ShardPtr = std::shared_ptr<const KnowledgeShard>;
  std::vector<ShardPtr> shards_copy() const;

  mutable std::mutex mutex_;
  std::vector<ShardPtr> shards_;
};

}  // namespace emr
