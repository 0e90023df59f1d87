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

#include "emr/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>

#include "emr/error.hpp"
#include "emr/store.hpp"

namespace emr {

namespace fs = std::filesystem;

const char* stage_name(Stage s) noexcept {
  switch (s) {
    case Stage::Encode: return "encode";
    case Stage::Encrypt: return "encrypt";
    case Stage::Transmit: return "transmit";
    case Stage::Verify: return "verify";
    case Stage::Layer: return "layer";
    case Stage::Matte: return "matte";
    case Stage::Identify: return "identify";
    case Stage::Fuse: return "fuse";
    case Stage::Emit: return "emit";
  }
  return "?";
}

double FrameMetrics::wall_ms() const noexcept { return std::accumulate(stage_ms.begin(), stage_ms.end(), 0.0); }

std::vector<fs::path> list_frames(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() != 16 || name.rfind("frame_", 0) != 0 || name.substr(12) != ".ppm") continue;
    if (!std::all_of(name.begin() + 6, name.begin() + 12, [](char c) { return c >= '0' && c <= '9'; })) continue;
    out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string emit_metrics(std::span<const FrameMetrics> records, bool wall_clock) {
  std::string out = kMetricsHeader;
  out += '\n';
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%lld,%s,%.6f,%.6f,%d,%d,%d,%d,%d,%zu,%s,%.6f\n", static_cast<long long>(r.frame),
                  r.level.c_str(), r.mos, r.latency, r.degraded ? 1 : 0, r.tamper, r.replay, r.unauth, r.drop ? 1 : 0,
                  r.fg_pixels, r.identity.c_str(), wall_clock ? r.wall_ms() : r.transport_ms);
    out += buf;
  }
  return out;
}

namespace {

constexpr std::uint8_t kPayloadMagic[4] = {'E', 'M', 'R', '1'};
constexpr std::size_t kPayloadHeader = 4 + 8 + 4 + 4 + 4;

// Frame payload: magic | index(8) | original width(4) | original height(4) | scale(4) | PNM bytes.
std::vector<std::uint8_t> pack_payload(std::int64_t index, int orig_w, int orig_h, int scale, const Frame& f) {
  std::vector<std::uint8_t> out(kPayloadHeader);
  std::copy(std::begin(kPayloadMagic), std::end(kPayloadMagic), out.begin());
  store_be64(static_cast<std::uint64_t>(index), out.data() + 4);
  store_be32(static_cast<std::uint32_t>(orig_w), out.data() + 12);
  store_be32(static_cast<std::uint32_t>(orig_h), out.data() + 16);
  store_be32(static_cast<std::uint32_t>(scale), out.data() + 20);
  auto pnm = encode_pnm(f);
  out.insert(out.end(), pnm.begin(), pnm.end());
  return out;
}

Frame unpack_payload(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPayloadHeader || !std::equal(std::begin(kPayloadMagic), std::end(kPayloadMagic), bytes.begin()))
    raise(ErrorCode::MalformedImage, "bad frame payload header");
  const auto index = static_cast<std::int64_t>(load_be64(bytes.data() + 4));
  const auto orig_w = static_cast<int>(load_be32(bytes.data() + 12));
  const auto orig_h = static_cast<int>(load_be32(bytes.data() + 16));
  const auto scale = static_cast<int>(load_be32(bytes.data() + 20));
  Frame f = upsample_nearest(decode_pnm(bytes.subspan(kPayloadHeader)), scale);
  if (f.width() != orig_w || f.height() != orig_h) raise(ErrorCode::DimensionMismatch, "payload geometry mismatch");
  f.set_index(index);
  return f;
}

std::int64_t index_from_name(const fs::path& p) { return std::stoll(p.filename().string().substr(6, 6)); }

// Bounding box of the mask grown to at least 16x16 and clamped to the frame.
std::optional<Frame> face_region(const Frame& frame, const Frame& mask) {
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask.at(x, y)) {
        x0 = std::min(x0, x), y0 = std::min(y0, y);
        x1 = std::max(x1, x), y1 = std::max(y1, y);
      }
  if (x1 < 0) return std::nullopt;
  const int side = static_cast<int>(kTemplateSide);
  if (frame.width() < side || frame.height() < side) return std::nullopt;
  auto grow = [side](int& lo, int& hi, int limit) {
    int len = hi - lo + 1;
    if (len < side) {
      lo -= (side - len) / 2;
      hi = lo + side - 1;
    }
    if (lo < 0) hi -= lo, lo = 0;
    if (hi >= limit) lo -= hi - (limit - 1), hi = limit - 1;
  };
  grow(x0, x1, frame.width());
  grow(y0, y1, frame.height());
  Frame out(x1 - x0 + 1, y1 - y0 + 1, frame.channels());
  out.set_index(frame.index());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x)
      for (int c = 0; c < frame.channels(); ++c) out.at(x, y, c) = frame.at(x0 + x, y0 + y, c);
  return out;
}

class StageClock {
 public:
  explicit StageClock(double& slot) : slot_(slot), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    slot_ += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  double& slot_;
  std::chrono::steady_clock::time_point start_;
};

// Receiver-side state for stages 5..9; each member is owned by this worker only.
class Receiver {
 public:
  Receiver(const PipelineConfig& cfg, Frame background, KnowledgeStore store, RunResult& result)
      : cfg_(cfg), background_(std::move(background)), store_(std::move(store)), result_(result) {}

  void process(std::span<const std::uint8_t> plain, FrameMetrics& rec) {
    const Frame frame = unpack_payload(plain);
    auto trace = [&](Stage s) { result_.trace.push_back({rec.frame, s}); };
    auto slot = [&](Stage s) -> double& { return rec.stage_ms[static_cast<int>(s) - 1]; };

    Frame mask;
    {
      StageClock clock(slot(Stage::Layer));
      trace(Stage::Layer);
      if (!model_) model_.emplace(frame, cfg_.gmm);
      mask = mask_postprocess(model_->update_classify(frame));
      rec.fg_pixels = count_foreground(mask);
    }
    AlphaMatte matte;
    {
      StageClock clock(slot(Stage::Matte));
      trace(Stage::Matte);
      const Trimap trimap = trimap_from_mask(mask, cfg_.r_fg, cfg_.r_bg);
      matte = alpha_solve(frame, trimap, cfg_.matting).matte;
      if (!fuzzy_) fuzzy_.emplace(frame.width(), frame.height(), cfg_.fuzzy_rate);
      fuzzy_ = fuzzy_->updated(matte);
    }
    {
      StageClock clock(slot(Stage::Identify));
      trace(Stage::Identify);
      if (auto region = face_region(frame, mask)) {
        const TemplateVector t = extract_template(*region);
        if (cfg_.enroll_user && enrolled_ < cfg_.enroll_frames) {
          store_.enroll(*cfg_.enroll_user, t);
          ++enrolled_;
        }
        rec.identity = store_.identify(t, cfg_.theta).user_id.value_or("UNKNOWN");
      } else {
        rec.identity = "NONE";
      }
    }
    Frame fused;
    {
      StageClock clock(slot(Stage::Fuse));
      trace(Stage::Fuse);
      const RvoLayer layer{frame, matte, cfg_.transform, cfg_.depth};
      fused = compose(background_, std::span(&layer, 1));
    }
    {
      StageClock clock(slot(Stage::Emit));
      trace(Stage::Emit);
      char name[32];
      std::snprintf(name, sizeof name, "out_%06lld.ppm", static_cast<long long>(rec.frame));
      write_pnm(cfg_.output_dir / name, fused);
      rec.output_written = true;
      ++result_.outputs_written;
    }
  }

  const KnowledgeStore& store() const { return store_; }

 private:
  const PipelineConfig& cfg_;
  Frame background_;
  KnowledgeStore store_;
  RunResult& result_;
  std::optional<LayerModel> model_;
  std::optional<FuzzyKnowledge> fuzzy_;
  int enrolled_ = 0;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) raise(ErrorCode::Io, "short write to " + path.string());
}

}  // namespace

RunResult run_pipeline(const PipelineConfig& cfg, const RunOptions& options) {
  validate_paths(cfg);
  RunResult result;
  auto log = [&](std::string line) { result.log.push_back(std::move(line)); };

  std::vector<ViewSource> views = cfg.views;
  if (views.empty()) views.push_back({"front", 0.0, cfg.frames_dir.string()});
  const ViewSource& view = views[select_view(views, cfg.target_angle)];
  result.selected_view = view.id;
  log("selected view " + view.id + " at " + std::to_string(view.angle_deg) + " deg");

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir)) raise(ErrorCode::Io, "cannot create output dir " + cfg.output_dir.string());

  const auto files = list_frames(view.frames_dir);
  Frame background = read_pnm(cfg.background);

  // Agents: sender camera, receiver workstation, and an unregistered intruder key.
  const DhGroup& group = cfg.group;
  const KeyPair sender = keypair_gen(cfg.sender_seed.value_or(mix_seed(cfg.seed, 3)), group);
  const KeyPair receiver = keypair_gen(cfg.receiver_seed.value_or(mix_seed(cfg.seed, 4)), group);
  const KeyPair intruder = keypair_gen(mix_seed(cfg.seed, 5), group);
  Registry registry;
  registry.add(fingerprint(sender.public_key, group));
  registry.add(fingerprint(receiver.public_key, group));
  for (const auto& d : cfg.extra_trusted) registry.add(d);
  SessionTunnel tx = handshake(sender, receiver.public_key, registry, group, cfg.chaos);
  SessionTunnel rx = handshake(receiver, sender.public_key, registry, group, cfg.chaos);

  Link link({"sender", "receiver", cfg.channel.capacity, cfg.channel.base_delay, cfg.channel.loss_prob,
             mix_seed(cfg.seed, 1)});
  Adversary adversary("intruder", cfg.adversary, mix_seed(cfg.seed, 2), fingerprint(intruder.public_key, group));

  KnowledgeStore store(cfg.shard_count);
  if (cfg.store_dir) {
    store = KnowledgeStore::load(*cfg.store_dir);
    if (store.shard_count() != cfg.shard_count) store.rebalance(cfg.shard_count);
  }
  Receiver worker(cfg, std::move(background), std::move(store), result);

  result.records.resize(files.size());
  EventLoop loop;
  for (std::size_t i = 0; i < files.size(); ++i) {
    result.records[i].frame = index_from_name(files[i]);
    const double capture_time = static_cast<double>(i) / cfg.fps;
    loop.schedule(capture_time, [&, i, capture_time](double now) {
      FrameMetrics& rec = result.records[i];
      auto trace = [&](Stage s) { result.trace.push_back({rec.frame, s}); };
      try {
        std::vector<Envelope> envelopes;
        std::uint64_t own_seq = 0;
        {
          StageClock clock(rec.stage_ms[0]);
          trace(Stage::Encode);
          Frame frame = read_pnm(files[i]);
          frame.set_index(rec.frame);
          std::vector<EncodingLevel> levels;
          for (const auto& l : cfg.levels)
            levels.push_back({l.id, l.scale_factor, l.quant_step,
                              l.bits_per_frame > 0.0 ? l.bits_per_frame
                                                     : estimate_bits_per_frame(frame.width(), frame.height(),
                                                                               frame.channels(), l.scale_factor,
                                                                               l.quant_step)});
          const Selection sel = select_encoding(levels, cfg.channel, cfg.fps, cfg.mos, cfg.policy, cfg.balance_w,
                                                cfg.constraints, {cfg.latency_min, cfg.constraints.latency_max});
          const EncodingLevel& level = levels[sel.index];
          rec.level = level.id;
          rec.mos = sel.score.mos;
          rec.latency = sel.score.latency;
          rec.degraded = sel.degraded;
          const Frame encoded = reencode(frame, level);
          auto payload = pack_payload(rec.frame, frame.width(), frame.height(), level.scale_factor, encoded);

          StageClock enc_clock(rec.stage_ms[1]);
          trace(Stage::Encrypt);
          Envelope env = tx.encrypt(payload);
          own_seq = env.seq;
          const bool attacked = cfg.adversary != AdversaryMode::None && i % cfg.adversary_period == 0;
          envelopes = attacked ? adversary.interpose(env) : std::vector<Envelope>{env};
        }
        StageClock clock(rec.stage_ms[2]);
        trace(Stage::Transmit);
        bool own_delivered = false;
        for (const auto& e : envelopes) {
          auto wire = e.serialize();
          const bool own = e.seq == own_seq;
          const Delivery d = link.transmit(static_cast<double>(wire.size()) * 8.0, now);
          if (!d.delivered) continue;
          own_delivered = own_delivered || own;
          loop.schedule(d.arrival, [&, i, own, capture_time, wire = std::move(wire)](double arrival) {
            FrameMetrics& r = result.records[i];
            std::vector<std::uint8_t> plain;
            {
              StageClock verify_clock(r.stage_ms[3]);
              result.trace.push_back({r.frame, Stage::Verify});
              try {
                plain = rx.decrypt_verify(Envelope::parse(wire), registry);
              } catch (const Error& err) {
                switch (err.code()) {
                  case ErrorCode::ReplayAlarm: ++r.replay; break;
                  case ErrorCode::UnauthorizedAgent: ++r.unauth; break;
                  default: ++r.tamper; break;
                }
                log("frame " + std::to_string(r.frame) + ": " + err.what());
                if (own) r.error = err.what();
                return;
              }
            }
            if (!own) {
              log("frame " + std::to_string(r.frame) + ": late envelope discarded");
              return;
            }
            r.transport_ms = (arrival - capture_time) * 1000.0;
            try {
              worker.process(plain, r);
            } catch (const Error& err) {
              if (err.code() == ErrorCode::Io) throw;
              r.error = err.what();
              log("frame " + std::to_string(r.frame) + " skipped: " + err.what());
            }
          });
        }
        if (!own_delivered) {
          rec.drop = true;
          log("frame " + std::to_string(rec.frame) + ": dropped in transit");
        }
      } catch (const Error& err) {
        if (err.code() == ErrorCode::Io && fs::exists(files[i])) throw;
        rec.error = err.what();
        log("frame " + std::to_string(rec.frame) + " skipped: " + err.what());
      }
    });
  }
  loop.run();

  write_text(cfg.resolved_metrics_path(), emit_metrics(result.records, options.wall_clock_metrics));
  worker.store().save(cfg.output_dir / "store");
  if (options.write_logs) {
    std::string trace;
    for (const auto& ev : result.trace)
      trace += "frame=" + std::to_string(ev.frame) + " stage=" + std::to_string(static_cast<int>(ev.stage)) + " " +
               stage_name(ev.stage) + "\n";
    write_text(cfg.output_dir / "stage_trace.log", trace);
    std::string text;
    for (const auto& line : result.log) text += line + "\n";
    write_text(cfg.output_dir / "run.log", text);
  }
  return result;
}

}  // namespace emr
