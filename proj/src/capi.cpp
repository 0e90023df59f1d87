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

#include "emr/emr.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "emr/config.hpp"
#include "emr/error.hpp"
#include "emr/pipeline.hpp"
#include "emr/store.hpp"
#include "emr/synthetic.hpp"

struct emr_buffer {
  std::vector<std::uint8_t> bytes;
};
struct emr_frame {
  emr::Frame frame;
};
struct emr_layer_model {
  emr::LayerModel model;
};
struct emr_registry {
  emr::Registry registry;
};
struct emr_tunnel {
  emr::SessionTunnel tunnel;
};
struct emr_store {
  emr::KnowledgeStore store;
};
struct emr_link {
  emr::Link link;
};

namespace {

thread_local std::string g_last_error;

emr_status fail(emr_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
emr_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return EMR_OK;
  } catch (const emr::Error& e) {
    return fail(static_cast<emr_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(EMR_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EMR_E_INTERNAL, e.what());
  }
}

#define EMR_REQUIRE(cond)                                                     \
  do {                                                                        \
    if (!(cond)) return fail(EMR_E_INVALID_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

emr_buffer* make_buffer(std::vector<std::uint8_t> bytes) { return new emr_buffer{std::move(bytes)}; }
emr_buffer* make_buffer(const std::string& s) { return new emr_buffer{{s.begin(), s.end()}}; }

emr::GmmParams to_core(const emr_gmm_params& p) {
  return {p.max_components, p.match_sigmas, p.learning_rate, p.background_weight, p.var_init, p.var_min};
}

emr::Trimap to_trimap(int w, int h, const uint8_t* labels) {
  emr::Trimap t(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const uint8_t l = labels[static_cast<std::size_t>(y) * w + x];
      if (l > EMR_LABEL_UNKNOWN) emr::raise(emr::ErrorCode::InvalidParams, "trimap label out of range");
      t.set(x, y, static_cast<emr::Label>(l));
    }
  return t;
}

}  // namespace

extern "C" {

EMR_API const char* emr_status_name(emr_status status) {
  switch (status) {
    case EMR_OK: return "Ok";
    case EMR_E_INVALID_ARGUMENT: return "InvalidArgument";
    case EMR_E_INTERNAL: return "Internal";
    default: break;
  }
  const int v = static_cast<int>(status);
  if (v >= 1 && v <= static_cast<int>(emr::ErrorCode::Io))
    return emr::error_name(static_cast<emr::ErrorCode>(v)).data();
  return "Unknown";
}

EMR_API const char* emr_last_error(void) { return g_last_error.c_str(); }
EMR_API const char* emr_version(void) { return "0.1.0"; }

EMR_API const uint8_t* emr_buffer_data(const emr_buffer* b) { return b ? b->bytes.data() : nullptr; }
EMR_API size_t emr_buffer_size(const emr_buffer* b) { return b ? b->bytes.size() : 0; }
EMR_API void emr_buffer_free(emr_buffer* b) { delete b; }

// ---- frames

EMR_API emr_status emr_frame_create(int width, int height, int channels, const uint8_t* data, emr_frame** out) {
  EMR_REQUIRE(out);
  return guarded([&] {
    emr::Frame f(width, height, channels);
    if (data) std::memcpy(f.data().data(), data, f.data().size());
    *out = new emr_frame{std::move(f)};
  });
}

EMR_API emr_status emr_frame_read(const char* path, emr_frame** out) {
  EMR_REQUIRE(path && out);
  return guarded([&] { *out = new emr_frame{emr::read_pnm(path)}; });
}

EMR_API emr_status emr_frame_write(const emr_frame* f, const char* path) {
  EMR_REQUIRE(f && path);
  return guarded([&] { emr::write_pnm(path, f->frame); });
}

EMR_API emr_status emr_frame_decode(const uint8_t* bytes, size_t size, emr_frame** out) {
  EMR_REQUIRE((bytes || size == 0) && out);
  return guarded([&] { *out = new emr_frame{emr::decode_pnm({bytes, size})}; });
}

EMR_API emr_status emr_frame_encode(const emr_frame* f, emr_buffer** out) {
  EMR_REQUIRE(f && out);
  return guarded([&] { *out = make_buffer(emr::encode_pnm(f->frame)); });
}

EMR_API int emr_frame_width(const emr_frame* f) { return f ? f->frame.width() : 0; }
EMR_API int emr_frame_height(const emr_frame* f) { return f ? f->frame.height() : 0; }
EMR_API int emr_frame_channels(const emr_frame* f) { return f ? f->frame.channels() : 0; }
EMR_API const uint8_t* emr_frame_data(const emr_frame* f) { return f ? f->frame.data().data() : nullptr; }

EMR_API emr_status emr_frame_grayscale(const emr_frame* f, emr_frame** out) {
  EMR_REQUIRE(f && out);
  return guarded([&] { *out = new emr_frame{emr::to_grayscale(f->frame)}; });
}

EMR_API emr_status emr_frame_downsample(const emr_frame* f, int factor, emr_frame** out) {
  EMR_REQUIRE(f && out);
  return guarded([&] { *out = new emr_frame{emr::downsample(f->frame, factor)}; });
}

EMR_API emr_status emr_frame_quantize(const emr_frame* f, int step, emr_frame** out) {
  EMR_REQUIRE(f && out);
  return guarded([&] { *out = new emr_frame{emr::quantize(f->frame, step)}; });
}

EMR_API void emr_frame_free(emr_frame* f) { delete f; }

// ---- layering

EMR_API void emr_gmm_params_default(emr_gmm_params* params) {
  if (!params) return;
  const emr::GmmParams d;
  *params = {d.max_components, d.match_sigmas, d.learning_rate, d.background_weight, d.var_init, d.var_min};
}

EMR_API emr_status emr_layer_model_create(const emr_frame* first, const emr_gmm_params* params,
                                          emr_layer_model** out) {
  EMR_REQUIRE(first && out);
  return guarded([&] {
    const emr::GmmParams p = params ? to_core(*params) : emr::GmmParams{};
    *out = new emr_layer_model{emr::LayerModel(first->frame, p)};
  });
}

EMR_API emr_status emr_layer_model_update_classify(emr_layer_model* m, const emr_frame* f, emr_frame** mask) {
  EMR_REQUIRE(m && f && mask);
  return guarded([&] { *mask = new emr_frame{m->model.update_classify(f->frame)}; });
}

EMR_API emr_status emr_mask_postprocess(const emr_frame* mask, emr_frame** out) {
  EMR_REQUIRE(mask && out);
  return guarded([&] { *out = new emr_frame{emr::mask_postprocess(mask->frame)}; });
}

EMR_API void emr_layer_model_free(emr_layer_model* m) { delete m; }

// ---- matting

EMR_API emr_status emr_trimap_from_mask(const emr_frame* mask, int r_fg, int r_bg, uint8_t* labels) {
  EMR_REQUIRE(mask && labels);
  return guarded([&] {
    const emr::Trimap t = emr::trimap_from_mask(mask->frame, r_fg, r_bg);
    for (std::size_t i = 0; i < t.labels().size(); ++i) labels[i] = static_cast<uint8_t>(t.labels()[i]);
  });
}

EMR_API emr_status emr_alpha_solve(const emr_frame* f, const uint8_t* labels, int window, int max_iters, double eps,
                                   double* alpha, int* iterations) {
  EMR_REQUIRE(f && labels && alpha);
  return guarded([&] {
    const emr::Trimap t = to_trimap(f->frame.width(), f->frame.height(), labels);
    const emr::MattingResult r = emr::alpha_solve(f->frame, t, {window, max_iters, eps});
    std::copy(r.matte.alpha().begin(), r.matte.alpha().end(), alpha);
    if (iterations) *iterations = r.iterations;
  });
}

// ---- fusion

EMR_API emr_status emr_compose(const emr_frame* background, const emr_layer* layers, size_t count, emr_frame** out) {
  EMR_REQUIRE(background && out && (layers || count == 0));
  for (size_t i = 0; i < count; ++i) EMR_REQUIRE(layers[i].pixels && layers[i].alpha);
  return guarded([&] {
    std::vector<emr::RvoLayer> stack;
    stack.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      const emr::Frame& px = layers[i].pixels->frame;
      std::vector<double> a(layers[i].alpha, layers[i].alpha + px.pixel_count());
      stack.push_back({px, emr::AlphaMatte(px.width(), px.height(), std::move(a)),
                       {layers[i].scale, layers[i].tx, layers[i].ty}, layers[i].depth});
    }
    *out = new emr_frame{emr::compose(background->frame, stack)};
  });
}

EMR_API emr_status emr_select_view(const double* angles_deg, size_t count, double target_deg, size_t* index) {
  EMR_REQUIRE((angles_deg || count == 0) && index);
  return guarded([&] {
    std::vector<emr::ViewSource> views;
    for (size_t i = 0; i < count; ++i) views.push_back({std::to_string(i), angles_deg[i], {}});
    *index = emr::select_view(views, target_deg);
  });
}

// ---- encoding selection

EMR_API emr_status emr_select_encoding(const emr_level* levels, size_t count, const emr_selection_params* params,
                                       emr_selection* out) {
  EMR_REQUIRE((levels || count == 0) && params && out);
  return guarded([&] {
    std::vector<emr::EncodingLevel> ls;
    for (size_t i = 0; i < count; ++i)
      ls.push_back({levels[i].id ? levels[i].id : "", levels[i].scale_factor, levels[i].quant_step,
                    levels[i].bits_per_frame});
    emr::Policy policy;
    switch (params->policy) {
      case EMR_POLICY_QOE: policy = emr::Policy::OptimalQoe; break;
      case EMR_POLICY_QOS: policy = emr::Policy::OptimalQos; break;
      case EMR_POLICY_BALANCE: policy = emr::Policy::Balance; break;
      default: emr::raise(emr::ErrorCode::InvalidValue, "unknown policy");
    }
    const emr::Selection s = emr::select_encoding(
        ls, {params->capacity, params->base_delay, params->loss_prob}, params->fps, {params->b0, params->bmax}, policy,
        params->w, {params->mos_min, params->latency_max}, {params->latency_min, params->latency_max});
    *out = {s.index, s.degraded ? 1 : 0, s.score.mos, s.score.latency};
  });
}

// ---- tunnel

EMR_API emr_status emr_keypair_gen(uint64_t seed, uint64_t* private_key, uint64_t* public_key) {
  EMR_REQUIRE(private_key && public_key);
  return guarded([&] {
    const emr::KeyPair kp = emr::keypair_gen(seed, emr::DhGroup::desk61());
    *private_key = kp.private_key;
    *public_key = kp.public_key;
  });
}

EMR_API emr_status emr_fingerprint(uint64_t public_key, uint8_t out[32]) {
  EMR_REQUIRE(out);
  return guarded([&] {
    const emr::Digest d = emr::fingerprint(public_key, emr::DhGroup::desk61());
    std::memcpy(out, d.data(), d.size());
  });
}

EMR_API emr_status emr_registry_create(emr_registry** out) {
  EMR_REQUIRE(out);
  return guarded([&] { *out = new emr_registry{}; });
}

EMR_API emr_status emr_registry_add(emr_registry* r, const uint8_t fingerprint[32]) {
  EMR_REQUIRE(r && fingerprint);
  return guarded([&] {
    emr::Digest d;
    std::memcpy(d.data(), fingerprint, d.size());
    r->registry.add(d);
  });
}

EMR_API void emr_registry_free(emr_registry* r) { delete r; }

EMR_API emr_status emr_tunnel_handshake(uint64_t local_private, uint64_t peer_public, const emr_registry* r,
                                        emr_tunnel** out) {
  EMR_REQUIRE(r && out);
  return guarded([&] {
    const emr::DhGroup group = emr::DhGroup::desk61();
    const emr::KeyPair local = emr::keypair_from_private(local_private, group);
    *out = new emr_tunnel{emr::handshake(local, peer_public, r->registry, group, {})};
  });
}

EMR_API emr_status emr_tunnel_encrypt(emr_tunnel* t, const uint8_t* payload, size_t size, emr_buffer** wire) {
  EMR_REQUIRE(t && (payload || size == 0) && wire);
  return guarded([&] { *wire = make_buffer(t->tunnel.encrypt({payload, size}).serialize()); });
}

EMR_API emr_status emr_tunnel_decrypt(emr_tunnel* t, const emr_registry* r, const uint8_t* wire, size_t size,
                                      emr_buffer** payload) {
  EMR_REQUIRE(t && r && (wire || size == 0) && payload);
  return guarded([&] {
    *payload = make_buffer(t->tunnel.decrypt_verify(emr::Envelope::parse({wire, size}), r->registry));
  });
}

EMR_API void emr_tunnel_free(emr_tunnel* t) { delete t; }

// ---- store

EMR_API emr_status emr_store_create(size_t shard_count, emr_store** out) {
  EMR_REQUIRE(out);
  return guarded([&] { *out = new emr_store{emr::KnowledgeStore(shard_count)}; });
}

EMR_API emr_status emr_store_load(const char* dir, emr_store** out) {
  EMR_REQUIRE(dir && out);
  return guarded([&] { *out = new emr_store{emr::KnowledgeStore::load(dir)}; });
}

EMR_API emr_status emr_store_save(const emr_store* s, const char* dir) {
  EMR_REQUIRE(s && dir);
  return guarded([&] { s->store.save(dir); });
}

EMR_API emr_status emr_store_enroll(emr_store* s, const char* user_id, const emr_frame* face) {
  EMR_REQUIRE(s && user_id && face);
  return guarded([&] { s->store.enroll(user_id, emr::extract_template(face->frame)); });
}

EMR_API emr_status emr_store_identify(const emr_store* s, const emr_frame* face, double theta, char* user_id,
                                      size_t capacity, double* distance) {
  EMR_REQUIRE(s && face && user_id && capacity > 0);
  std::string name;
  double d = 1.0;
  const emr_status st = guarded([&] {
    const emr::Identification id = s->store.identify(emr::extract_template(face->frame), theta);
    name = id.user_id.value_or("");
    d = id.distance;
  });
  if (st != EMR_OK) return st;
  if (name.size() + 1 > capacity) return fail(EMR_E_INVALID_ARGUMENT, "user id buffer too small");
  std::memcpy(user_id, name.c_str(), name.size() + 1);
  if (distance) *distance = d;
  return EMR_OK;
}

EMR_API emr_status emr_store_rebalance(emr_store* s, size_t shard_count) {
  EMR_REQUIRE(s);
  return guarded([&] { s->store.rebalance(shard_count); });
}

EMR_API emr_status emr_store_set_online(emr_store* s, size_t node, int online) {
  EMR_REQUIRE(s);
  return guarded([&] { s->store.set_online(node, online != 0); });
}

EMR_API size_t emr_store_user_count(const emr_store* s) { return s ? s->store.user_count() : 0; }
EMR_API void emr_store_free(emr_store* s) { delete s; }

// ---- netsim

EMR_API emr_status emr_link_create(double capacity, double base_delay, double loss_prob, uint64_t seed,
                                   emr_link** out) {
  EMR_REQUIRE(out);
  return guarded([&] {
    *out = new emr_link{emr::Link({"sender", "receiver", capacity, base_delay, loss_prob, seed})};
  });
}

EMR_API emr_status emr_link_transmit(emr_link* l, double bits, double now, int* delivered, double* arrival) {
  EMR_REQUIRE(l && delivered);
  return guarded([&] {
    const emr::Delivery d = l->link.transmit(bits, now);
    *delivered = d.delivered ? 1 : 0;
    if (arrival) *arrival = d.arrival;
  });
}

EMR_API void emr_link_free(emr_link* l) { delete l; }

// ---- pipeline

EMR_API emr_status emr_config_validate(const char* path, emr_buffer** report) {
  EMR_REQUIRE(path);
  return guarded([&] {
    const emr::PipelineConfig cfg = emr::load_config(path);
    emr::validate_paths(cfg);
    std::string text;
    for (const auto& w : cfg.warnings) text += "warning: " + w + "\n";
    if (report) *report = make_buffer(text);
  });
}

EMR_API emr_status emr_config_template(emr_buffer** out) {
  EMR_REQUIRE(out);
  return guarded([&] { *out = make_buffer(emr::config_template()); });
}

EMR_API emr_status emr_pipeline_run(const emr_run_options* options, emr_run_summary* summary) {
  EMR_REQUIRE(options && options->config_path);
  return guarded([&] {
    emr::PipelineConfig cfg = emr::load_config(options->config_path);
    if (options->has_seed) cfg.seed = options->seed;
    if (options->policy) cfg.policy = emr::parse_policy(options->policy);
    if (options->adversary) cfg.adversary = emr::parse_adversary(options->adversary);
    if (options->out_dir) cfg.output_dir = options->out_dir;
    if (options->metrics_path) cfg.metrics_path = options->metrics_path;
    emr::RunOptions ro;
    ro.wall_clock_metrics = options->wall_clock != 0;
    const emr::RunResult r = emr::run_pipeline(cfg, ro);
    if (summary) {
      *summary = {r.records.size(), r.outputs_written, 0, 0};
      for (const auto& rec : r.records) {
        summary->dropped += rec.drop ? 1 : 0;
        summary->alarms += static_cast<size_t>(rec.tamper + rec.replay + rec.unauth);
      }
    }
  });
}

EMR_API emr_status emr_generate_synthetic(const char* dir, int frames, uint64_t seed) {
  EMR_REQUIRE(dir);
  return guarded([&] { emr::write_synthetic(dir, frames, seed); });
}

}  // extern "C"
