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

#include "emr/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "emr/error.hpp"

namespace emr {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& reason) {
  raise(ErrorCode::InvalidValue, key + ": " + reason);
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(d)) bad(key, "expected a real number, got '" + v + "'");
  return d;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad(key, "expected an unsigned integer, got '" + v + "'");
  return out;
}

double in_range(const std::string& key, double v, double lo, double hi) {
  if (!(v >= lo && v <= hi)) bad(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

int int_at_least(const std::string& key, std::int64_t v, std::int64_t lo) {
  if (v < lo || v > 1'000'000'000) bad(key, "must be >= " + std::to_string(lo));
  return static_cast<int>(v);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
  std::filesystem::path p(v);
  return p.is_absolute() || base.empty() ? p : base / p;
}

using Setter = std::function<void(PipelineConfig&, const std::string& key, const std::string& value,
                                  const std::filesystem::path& base)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](auto& c, auto& k, auto& v, auto&) { c.seed = to_u64(k, v); }},

      {"input.frames_dir", [](auto& c, auto&, auto& v, auto& b) { c.frames_dir = resolve(b, v); }},
      {"input.background", [](auto& c, auto&, auto& v, auto& b) { c.background = resolve(b, v); }},
      {"input.fps", [](auto& c, auto& k, auto& v, auto&) {
         c.fps = to_double(k, v);
         if (!(c.fps > 0.0)) bad(k, "must be > 0");
       }},
      {"input.target_angle", [](auto& c, auto& k, auto& v, auto&) { c.target_angle = to_double(k, v); }},
      {"input.views", [](auto& c, auto& k, auto& v, auto& b) {
         c.views.clear();
         for (const auto& item : split(v, ',')) {
           auto parts = split(item, ':');
           if (parts.size() != 3) bad(k, "view entries are id:angle:dir, got '" + item + "'");
           ViewSource vs{parts[0], to_double(k, parts[1]), resolve(b, parts[2]).string()};
           if (!(vs.angle_deg >= 0.0 && vs.angle_deg < 360.0)) bad(k, "view angle must be in [0,360)");
           c.views.push_back(std::move(vs));
         }
         if (c.views.empty()) bad(k, "at least one view required");
       }},

      {"output.dir", [](auto& c, auto&, auto& v, auto& b) { c.output_dir = resolve(b, v); }},
      {"output.metrics", [](auto& c, auto&, auto& v, auto& b) { c.metrics_path = resolve(b, v); }},

      {"encoding.levels", [](auto& c, auto& k, auto& v, auto&) {
         c.levels.clear();
         std::set<std::string> ids;
         for (const auto& item : split(v, ',')) {
           auto parts = split(item, ':');
           if (parts.size() != 3 && parts.size() != 4) bad(k, "level entries are id:scale:step[:bits], got '" + item + "'");
           LevelSpec l;
           l.id = parts[0];
           l.scale_factor = int_at_least(k, to_int(k, parts[1]), 1);
           l.quant_step = int_at_least(k, to_int(k, parts[2]), 1);
           if (l.quant_step > 128) bad(k, "quantization step must be <= 128");
           if (parts.size() == 4) {
             l.bits_per_frame = to_double(k, parts[3]);
             if (!(l.bits_per_frame > 0.0)) bad(k, "bits per frame must be > 0");
           }
           if (!ids.insert(l.id).second) bad(k, "duplicate level id '" + l.id + "'");
           c.levels.push_back(std::move(l));
         }
         if (c.levels.empty()) bad(k, "at least one level required");
       }},

      {"channel.capacity", [](auto& c, auto& k, auto& v, auto&) {
         c.channel.capacity = to_double(k, v);
         if (!(c.channel.capacity > 0.0)) bad(k, "must be > 0");
       }},
      {"channel.base_delay", [](auto& c, auto& k, auto& v, auto&) {
         c.channel.base_delay = to_double(k, v);
         if (!(c.channel.base_delay >= 0.0)) bad(k, "must be >= 0");
       }},
      {"channel.loss_prob", [](auto& c, auto& k, auto& v, auto&) { c.channel.loss_prob = in_range(k, to_double(k, v), 0, 1); }},

      {"qoe.policy", [](auto& c, auto& k, auto& v, auto&) {
         try {
           c.policy = parse_policy(v);
         } catch (const Error&) {
           bad(k, "must be qoe, qos or balance");
         }
       }},
      {"qoe.w", [](auto& c, auto& k, auto& v, auto&) { c.balance_w = in_range(k, to_double(k, v), 0, 1); }},
      {"qoe.mos_min", [](auto& c, auto& k, auto& v, auto&) { c.constraints.mos_min = in_range(k, to_double(k, v), 1, 5); }},
      {"qoe.latency_min", [](auto& c, auto& k, auto& v, auto&) {
         c.latency_min = to_double(k, v);
         if (!(c.latency_min >= 0.0)) bad(k, "must be >= 0");
       }},
      {"qoe.latency_max", [](auto& c, auto& k, auto& v, auto&) { c.constraints.latency_max = to_double(k, v); }},
      {"qoe.b0", [](auto& c, auto& k, auto& v, auto&) { c.mos.b0 = to_double(k, v); }},
      {"qoe.bmax", [](auto& c, auto& k, auto& v, auto&) { c.mos.bmax = to_double(k, v); }},

      {"tunnel.p", [](auto& c, auto& k, auto& v, auto&) { c.group.p = to_u64(k, v); }},
      {"tunnel.g", [](auto& c, auto& k, auto& v, auto&) { c.group.g = to_u64(k, v); }},
      {"tunnel.sender_seed", [](auto& c, auto& k, auto& v, auto&) { c.sender_seed = to_u64(k, v); }},
      {"tunnel.receiver_seed", [](auto& c, auto& k, auto& v, auto&) { c.receiver_seed = to_u64(k, v); }},
      {"tunnel.r", [](auto& c, auto& k, auto& v, auto&) {
         c.chaos.r = to_double(k, v);
         if (!(c.chaos.r > 0.0 && c.chaos.r <= 4.0)) bad(k, "must lie in (0,4]");
       }},
      {"tunnel.burn_in", [](auto& c, auto& k, auto& v, auto&) { c.chaos.burn_in = int_at_least(k, to_int(k, v), 0); }},
      {"tunnel.trusted", [](auto& c, auto& k, auto& v, auto&) {
         c.extra_trusted.clear();
         for (const auto& hex : split(v, ',')) {
           std::vector<std::uint8_t> bytes;
           try {
             bytes = from_hex(hex);
           } catch (const Error&) {
             bad(k, "fingerprints are 64 hex digits");
           }
           if (bytes.size() != 32) bad(k, "fingerprints are 64 hex digits");
           Digest d;
           std::copy(bytes.begin(), bytes.end(), d.begin());
           c.extra_trusted.push_back(d);
         }
       }},

      {"adversary.mode", [](auto& c, auto& k, auto& v, auto&) {
         try {
           c.adversary = parse_adversary(v);
         } catch (const Error&) {
           bad(k, "must be tamper, replay, impersonate or none");
         }
       }},
      {"adversary.period", [](auto& c, auto& k, auto& v, auto&) { c.adversary_period = int_at_least(k, to_int(k, v), 1); }},

      {"gmm.k", [](auto& c, auto& k, auto& v, auto&) { c.gmm.max_components = int_at_least(k, to_int(k, v), 1); }},
      {"gmm.lambda", [](auto& c, auto& k, auto& v, auto&) { c.gmm.match_sigmas = to_double(k, v); }},
      {"gmm.alpha_lr", [](auto& c, auto& k, auto& v, auto&) { c.gmm.learning_rate = in_range(k, to_double(k, v), 0, 1); }},
      {"gmm.t", [](auto& c, auto& k, auto& v, auto&) { c.gmm.background_weight = to_double(k, v); }},
      {"gmm.var_init", [](auto& c, auto& k, auto& v, auto&) { c.gmm.var_init = to_double(k, v); }},
      {"gmm.var_min", [](auto& c, auto& k, auto& v, auto&) { c.gmm.var_min = to_double(k, v); }},

      {"matting.r_fg", [](auto& c, auto& k, auto& v, auto&) { c.r_fg = int_at_least(k, to_int(k, v), 0); }},
      {"matting.r_bg", [](auto& c, auto& k, auto& v, auto&) { c.r_bg = int_at_least(k, to_int(k, v), 0); }},
      {"matting.window", [](auto& c, auto& k, auto& v, auto&) { c.matting.window = int_at_least(k, to_int(k, v), 1); }},
      {"matting.max_iters", [](auto& c, auto& k, auto& v, auto&) { c.matting.max_iters = int_at_least(k, to_int(k, v), 1); }},
      {"matting.eps", [](auto& c, auto& k, auto& v, auto&) {
         c.matting.eps = to_double(k, v);
         if (!(c.matting.eps > 0.0)) bad(k, "must be > 0");
       }},
      {"matting.lambda_t", [](auto& c, auto& k, auto& v, auto&) { c.fuzzy_rate = in_range(k, to_double(k, v), 0, 1); }},

      {"store.shards", [](auto& c, auto& k, auto& v, auto&) { c.shard_count = int_at_least(k, to_int(k, v), 1); }},
      {"store.theta", [](auto& c, auto& k, auto& v, auto&) {
         c.theta = to_double(k, v);
         if (!(c.theta > 0.0 && c.theta < 2.0)) bad(k, "must lie in (0,2)");
       }},
      {"store.path", [](auto& c, auto&, auto& v, auto& b) { c.store_dir = resolve(b, v); }},
      {"store.enroll_user", [](auto& c, auto& k, auto& v, auto&) {
         if (v.empty() || v.find(',') != std::string::npos) bad(k, "user id must be non-empty without commas");
         c.enroll_user = v;
       }},
      {"store.enroll_frames", [](auto& c, auto& k, auto& v, auto&) { c.enroll_frames = int_at_least(k, to_int(k, v), 1); }},

      {"scene.scale", [](auto& c, auto& k, auto& v, auto&) {
         c.transform.scale = to_double(k, v);
         if (!(c.transform.scale > 0.0)) bad(k, "must be > 0");
       }},
      {"scene.tx", [](auto& c, auto& k, auto& v, auto&) { c.transform.tx = static_cast<int>(to_int(k, v)); }},
      {"scene.ty", [](auto& c, auto& k, auto& v, auto&) { c.transform.ty = static_cast<int>(to_int(k, v)); }},
      {"scene.depth", [](auto& c, auto& k, auto& v, auto&) { c.depth = to_double(k, v); }},
  };
  return table;
}

// Cross-key checks, reusing each module's own validation.
void validate_semantics(const PipelineConfig& c) {
  try {
    c.gmm.validate();
  } catch (const Error& e) {
    raise(ErrorCode::InvalidValue, std::string("gmm: ") + e.what());
  }
  if (c.r_bg < c.r_fg) bad("matting.r_bg", "must be >= matting.r_fg");
  if (!(c.mos.b0 > 0.0)) bad("qoe.b0", "must be > 0");
  if (!(c.mos.bmax > c.mos.b0)) bad("qoe.bmax", "must be > qoe.b0");
  if (!(c.constraints.latency_max > c.latency_min)) bad("qoe.latency_max", "must be > qoe.latency_min");
  try {
    c.group.validate();
  } catch (const Error& e) {
    raise(ErrorCode::InvalidValue, std::string("tunnel: ") + e.what());
  }
}

}  // namespace

std::filesystem::path PipelineConfig::resolved_metrics_path() const {
  return metrics_path.empty() ? output_dir / "metrics.csv" : metrics_path;
}

PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  PipelineConfig cfg;
  cfg.output_dir = resolve(base_dir, "out");
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  const auto& table = setters();
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') raise(ErrorCode::InvalidValue, "line " + std::to_string(lineno) + ": unterminated section");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) raise(ErrorCode::InvalidValue, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!section.empty()) key = section + "." + key;
    auto it = table.find(key);
    if (it == table.end()) raise(ErrorCode::UnknownKey, key);
    if (!seen.insert(key).second)
      cfg.warnings.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "', last value wins");
    it->second(cfg, key, value, base_dir);
  }
  if (cfg.views.empty() && cfg.frames_dir.empty()) raise(ErrorCode::MissingKey, "input.frames_dir");
  if (cfg.background.empty()) raise(ErrorCode::MissingKey, "input.background");
  validate_semantics(cfg);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::Io, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

void validate_paths(const PipelineConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.views.empty() && !fs::is_directory(cfg.frames_dir))
    bad("input.frames_dir", "directory does not exist: " + cfg.frames_dir.string());
  for (const auto& v : cfg.views)
    if (!fs::is_directory(v.frames_dir)) bad("input.views", "directory does not exist: " + v.frames_dir);
  if (!fs::is_regular_file(cfg.background)) bad("input.background", "file does not exist: " + cfg.background.string());
  if (cfg.store_dir && !fs::is_directory(*cfg.store_dir))
    bad("store.path", "directory does not exist: " + cfg.store_dir->string());
}

std::string config_template() {
  return R"(# emr pipeline configuration. Keys may be written as `section.key` at the
# top level or as `key` inside a [section]. Paths are relative to this file.
seed = 1

[input]
frames_dir = .              # required unless views is set; frame_%06d.ppm files
background = background.ppm # required; target scene (PPM)
fps = 30
# views = front:0:front_dir, profile:90:profile_dir
target_angle = 0

[output]
dir = out
# metrics = out/metrics.csv

[encoding]
levels = full:1:1, half:2:4, quarter:4:16   # id:scale:step[:bits_per_frame]

[channel]
capacity = 2000000
base_delay = 0.01
loss_prob = 0

[qoe]
policy = balance            # qoe | qos | balance
w = 0.5
mos_min = 3.0
latency_min = 0
latency_max = 0.1
b0 = 200000
bmax = 3000000

[tunnel]
p = 2305843009213691579
g = 2
# sender_seed = 11
# receiver_seed = 12
r = 3.99
burn_in = 1000
# trusted = <64 hex digits>, ...

[adversary]
mode = none                 # none | tamper | replay | impersonate
period = 1

[gmm]
k = 3
lambda = 2.5
alpha_lr = 0.02
t = 0.7
var_init = 225
var_min = 4

[matting]
r_fg = 2
r_bg = 4
window = 3
max_iters = 20
eps = 0.00392156862745098
lambda_t = 0.2

[store]
shards = 4
theta = 0.35
# path = store
# enroll_user = user0
enroll_frames = 1

[scene]
scale = 1
tx = 0
ty = 0
depth = 1
)";
}

}  // namespace emr
