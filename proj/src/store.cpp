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

#include "emr/store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "emr/digest.hpp"
#include "emr/error.hpp"

namespace emr {

namespace {

void check_user_id(const std::string& id) {
  if (id.empty() || id.find_first_of(",\r\n") != std::string::npos)
    raise(ErrorCode::InvalidParams, "user id must be non-empty and free of commas and newlines");
}

std::string shard_file_name(std::size_t node) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "shard_%03zu.csv", node);
  return buf;
}

}  // namespace

TemplateVector extract_template(const Frame& face_region) {
  if (face_region.width() < static_cast<int>(kTemplateSide) || face_region.height() < static_cast<int>(kTemplateSide))
    raise(ErrorCode::DimensionMismatch, "face region must be at least 16x16");
  const Frame gray = face_region.channels() == 3 ? to_grayscale(face_region) : face_region;
  TemplateVector v{};
  for (std::size_t y = 0; y < kTemplateSide; ++y)
    for (std::size_t x = 0; x < kTemplateSide; ++x) {
      const int sx = static_cast<int>(x * gray.width() / kTemplateSide);
      const int sy = static_cast<int>(y * gray.height() / kTemplateSide);
      v[y * kTemplateSide + x] = gray.at(sx, sy);
    }
  double mean = 0.0;
  for (double s : v) mean += s;
  mean /= kTemplateDim;
  double norm = 0.0;
  for (double& s : v) {
    s -= mean;
    norm += s * s;
  }
  norm = std::sqrt(norm);
  if (norm < 1e-9) raise(ErrorCode::DegenerateTemplate, "constant region has no template");
  for (double& s : v) s /= norm;
  return v;
}

std::size_t shard_of(const std::string& user_id, std::size_t shard_count) {
  if (shard_count == 0) raise(ErrorCode::InvalidShardCount, "shard count must be >= 1");
  const Digest d = sha256(user_id);
  return static_cast<std::size_t>(load_be64(d.data()) % shard_count);
}

double cosine_distance(const TemplateVector& a, const TemplateVector& b) noexcept {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < kTemplateDim; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

KnowledgeStore::KnowledgeStore(std::size_t shard_count) {
  if (shard_count == 0) raise(ErrorCode::InvalidShardCount, "shard count must be >= 1");
  for (std::size_t i = 0; i < shard_count; ++i) {
    auto s = std::make_shared<KnowledgeShard>();
    s->node_id = i;
    shards_.push_back(std::move(s));
  }
}

KnowledgeStore::KnowledgeStore(const KnowledgeStore& other) : shards_(other.shards_copy()) {}

KnowledgeStore& KnowledgeStore::operator=(const KnowledgeStore& other) {
  if (this != &other) {
    auto copy = other.shards_copy();
    std::lock_guard lock(mutex_);
    shards_ = std::move(copy);
  }
  return *this;
}

std::vector<KnowledgeStore::ShardPtr> KnowledgeStore::shards_copy() const {
  std::lock_guard lock(mutex_);
  return shards_;
}

std::size_t KnowledgeStore::shard_count() const { return shards_copy().size(); }

void KnowledgeStore::enroll(const std::string& user_id, const TemplateVector& t) {
  check_user_id(user_id);
  for (double v : t)
    if (!std::isfinite(v)) raise(ErrorCode::InvalidParams, "template contains non-finite values");
  std::lock_guard lock(mutex_);
  const std::size_t node = shard_of(user_id, shards_.size());
  if (!shards_[node]->online) raise(ErrorCode::ShardUnavailable, "shard " + std::to_string(node) + " is offline");
  auto shard = std::make_shared<KnowledgeShard>(*shards_[node]);
  auto [it, inserted] = shard->templates.try_emplace(user_id);
  IdentityTemplate& rec = it->second;
  if (inserted) {
    rec.user_id = user_id;
    rec.centroid = t;
    rec.sample_count = 1;
  } else {
    const double n = static_cast<double>(rec.sample_count);
    for (std::size_t i = 0; i < kTemplateDim; ++i) rec.centroid[i] = (n * rec.centroid[i] + t[i]) / (n + 1.0);
    ++rec.sample_count;
  }
  shards_[node] = std::move(shard);
}

Identification KnowledgeStore::identify(const TemplateVector& t, double theta) const {
  if (!(theta > 0.0 && theta < 2.0)) raise(ErrorCode::InvalidParams, "theta must lie in (0,2)");
  const auto shards = shards_copy();
  Identification best;
  const std::string* best_id = nullptr;
  double best_d = 0.0;
  for (const auto& shard : shards) {
    if (!shard->online) continue;
    for (const auto& [id, rec] : shard->templates) {
      const double d = cosine_distance(t, rec.centroid);
      if (!best_id || d < best_d || (d == best_d && id < *best_id)) {
        best_id = &id;
        best_d = d;
      }
    }
  }
  if (best_id) {
    best.distance = best_d;
    if (best_d <= theta) best.user_id = *best_id;
  }
  return best;
}

void KnowledgeStore::rebalance(std::size_t n) {
  if (n == 0) raise(ErrorCode::InvalidShardCount, "shard count must be >= 1");
  std::lock_guard lock(mutex_);
  std::vector<std::shared_ptr<KnowledgeShard>> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = std::make_shared<KnowledgeShard>();
    next[i]->node_id = i;
  }
  for (const auto& shard : shards_)
    for (const auto& [id, rec] : shard->templates) next[shard_of(id, n)]->templates.emplace(id, rec);
  shards_.assign(next.begin(), next.end());
}

void KnowledgeStore::set_online(std::size_t node, bool online) {
  std::lock_guard lock(mutex_);
  if (node >= shards_.size()) raise(ErrorCode::InvalidShardCount, "no such shard");
  auto shard = std::make_shared<KnowledgeShard>(*shards_[node]);
  shard->online = online;
  shards_[node] = std::move(shard);
}

std::vector<KnowledgeShard> KnowledgeStore::snapshot() const {
  std::vector<KnowledgeShard> out;
  for (const auto& s : shards_copy()) out.push_back(*s);
  return out;
}

std::vector<IdentityTemplate> KnowledgeStore::all_templates() const {
  std::vector<IdentityTemplate> out;
  for (const auto& s : shards_copy())
    for (const auto& [id, rec] : s->templates) out.push_back(rec);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.user_id < b.user_id; });
  return out;
}

std::size_t KnowledgeStore::user_count() const {
  std::size_t n = 0;
  for (const auto& s : shards_copy()) n += s->templates.size();
  return n;
}

void KnowledgeStore::save(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) raise(ErrorCode::Io, "cannot create " + dir.string());
  const auto shards = shards_copy();
  char num[32];
  for (const auto& shard : shards) {
    std::ofstream out(dir / shard_file_name(shard->node_id));
    if (!out) raise(ErrorCode::Io, "cannot write shard file in " + dir.string());
    for (const auto& [id, rec] : shard->templates) {
      out << id << ',' << rec.sample_count;
      for (double v : rec.centroid) {
        std::snprintf(num, sizeof num, "%.17g", v);
        out << ',' << num;
      }
      out << '\n';
    }
    if (!out) raise(ErrorCode::Io, "short write in " + dir.string());
  }
}

KnowledgeStore KnowledgeStore::load(const std::filesystem::path& dir) {
  std::size_t n = 0;
  while (std::filesystem::exists(dir / shard_file_name(n))) ++n;
  if (n == 0) raise(ErrorCode::Io, "no shard files in " + dir.string());
  KnowledgeStore store(n);
  for (std::size_t node = 0; node < n; ++node) {
    std::ifstream in(dir / shard_file_name(node));
    if (!in) raise(ErrorCode::Io, "cannot read shard " + std::to_string(node));
    auto shard = std::make_shared<KnowledgeShard>();
    shard->node_id = node;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::string where = shard_file_name(node) + ":" + std::to_string(lineno);
      std::vector<std::string> fields;
      std::stringstream ss(line);
      std::string field;
      while (std::getline(ss, field, ',')) fields.push_back(field);
      if (fields.size() != 2 + kTemplateDim) raise(ErrorCode::Io, where + ": expected 258 fields");
      IdentityTemplate rec;
      rec.user_id = fields[0];
      check_user_id(rec.user_id);
      char* end = nullptr;
      rec.sample_count = std::strtoull(fields[1].c_str(), &end, 10);
      if (*end != '\0' || rec.sample_count == 0) raise(ErrorCode::Io, where + ": bad sample count");
      for (std::size_t i = 0; i < kTemplateDim; ++i) {
        rec.centroid[i] = std::strtod(fields[2 + i].c_str(), &end);
        if (*end != '\0') raise(ErrorCode::Io, where + ": bad real");
      }
      if (shard_of(rec.user_id, n) != node) raise(ErrorCode::Io, where + ": record belongs to another shard");
      shard->templates.emplace(rec.user_id, std::move(rec));
    }
    store.shards_[node] = std::move(shard);
  }
  return store;
}

}  // namespace emr
