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

/* C interface to the emr library. Every function returns an emr_status;
 * objects are opaque handles released with the matching _free call. After a
 * failure, emr_last_error() holds a message for the calling thread. */
#ifndef EMR_EMR_H
#define EMR_EMR_H

#include <stddef.h>
#include <stdint.h>

#if defined(EMR_BUILDING_LIBRARY)
#define EMR_API __attribute__((visibility("default")))
#else
#define EMR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 1..30 match the core error codes one to one. */
typedef enum emr_status {
  EMR_OK = 0,
  EMR_E_INVALID_CHANNELS = 1,
  EMR_E_DIMENSION_MISMATCH = 2,
  EMR_E_INVALID_FACTOR = 3,
  EMR_E_INVALID_STEP = 4,
  EMR_E_MALFORMED_IMAGE = 5,
  EMR_E_INVALID_PARAMS = 6,
  EMR_E_INVALID_MASK = 7,
  EMR_E_INVALID_RADII = 8,
  EMR_E_INSUFFICIENT_LABELS = 9,
  EMR_E_INVALID_TRANSFORM = 10,
  EMR_E_NO_VIEWS = 11,
  EMR_E_INVALID_MODEL = 12,
  EMR_E_INVALID_CHANNEL = 13,
  EMR_E_INVALID_BOUNDS = 14,
  EMR_E_NO_LEVELS = 15,
  EMR_E_GROUP_TOO_SMALL = 16,
  EMR_E_INVALID_KEY = 17,
  EMR_E_UNAUTHORIZED_AGENT = 18,
  EMR_E_RESEED_REQUIRED = 19,
  EMR_E_TAMPER_ALARM = 20,
  EMR_E_REPLAY_ALARM = 21,
  EMR_E_MALFORMED_ENVELOPE = 22,
  EMR_E_DEGENERATE_TEMPLATE = 23,
  EMR_E_SHARD_UNAVAILABLE = 24,
  EMR_E_INVALID_SHARD_COUNT = 25,
  EMR_E_INVALID_PAYLOAD = 26,
  EMR_E_UNKNOWN_KEY = 27,
  EMR_E_INVALID_VALUE = 28,
  EMR_E_MISSING_KEY = 29,
  EMR_E_IO = 30,
  EMR_E_INVALID_ARGUMENT = 100, /* null handle or out-pointer, undersized buffer */
  EMR_E_INTERNAL = 101
} emr_status;

EMR_API const char* emr_status_name(emr_status status);
EMR_API const char* emr_last_error(void);
EMR_API const char* emr_version(void);

/* ---- byte buffers returned by the library ---- */
typedef struct emr_buffer emr_buffer;
EMR_API const uint8_t* emr_buffer_data(const emr_buffer* b);
EMR_API size_t emr_buffer_size(const emr_buffer* b);
EMR_API void emr_buffer_free(emr_buffer* b);

/* ---- frames (8-bit, interleaved, 1 or 3 channels) ---- */
typedef struct emr_frame emr_frame;
/* data may be NULL for a zero-filled frame; otherwise w*h*channels bytes. */
EMR_API emr_status emr_frame_create(int width, int height, int channels, const uint8_t* data, emr_frame** out);
EMR_API emr_status emr_frame_read(const char* path, emr_frame** out);
EMR_API emr_status emr_frame_write(const emr_frame* f, const char* path);
EMR_API emr_status emr_frame_decode(const uint8_t* bytes, size_t size, emr_frame** out);
EMR_API emr_status emr_frame_encode(const emr_frame* f, emr_buffer** out);
EMR_API int emr_frame_width(const emr_frame* f);
EMR_API int emr_frame_height(const emr_frame* f);
EMR_API int emr_frame_channels(const emr_frame* f);
EMR_API const uint8_t* emr_frame_data(const emr_frame* f);
EMR_API emr_status emr_frame_grayscale(const emr_frame* f, emr_frame** out);
EMR_API emr_status emr_frame_downsample(const emr_frame* f, int factor, emr_frame** out);
EMR_API emr_status emr_frame_quantize(const emr_frame* f, int step, emr_frame** out);
EMR_API void emr_frame_free(emr_frame* f);

/* ---- scene layering ---- */
typedef struct emr_gmm_params {
  int max_components;
  double match_sigmas;
  double learning_rate;
  double background_weight;
  double var_init;
  double var_min;
} emr_gmm_params;

typedef struct emr_layer_model emr_layer_model;
EMR_API void emr_gmm_params_default(emr_gmm_params* params);
EMR_API emr_status emr_layer_model_create(const emr_frame* first, const emr_gmm_params* params, emr_layer_model** out);
/* Classifies f against the model, then updates it. The mask is 1 channel, 0/255. */
EMR_API emr_status emr_layer_model_update_classify(emr_layer_model* m, const emr_frame* f, emr_frame** mask);
EMR_API emr_status emr_mask_postprocess(const emr_frame* mask, emr_frame** out);
EMR_API void emr_layer_model_free(emr_layer_model* m);

/* ---- matting; trimap labels are 0 background, 1 foreground, 2 unknown ---- */
#define EMR_LABEL_BACKGROUND 0
#define EMR_LABEL_FOREGROUND 1
#define EMR_LABEL_UNKNOWN 2

/* labels receives width*height bytes. */
EMR_API emr_status emr_trimap_from_mask(const emr_frame* mask, int r_fg, int r_bg, uint8_t* labels);
/* alpha receives width*height values; iterations may be NULL. */
EMR_API emr_status emr_alpha_solve(const emr_frame* f, const uint8_t* labels, int window, int max_iters, double eps,
                                   double* alpha, int* iterations);

/* ---- fusion ---- */
typedef struct emr_layer {
  const emr_frame* pixels;
  const double* alpha; /* width*height of pixels */
  double scale;
  int tx;
  int ty;
  double depth; /* larger is nearer */
} emr_layer;

EMR_API emr_status emr_compose(const emr_frame* background, const emr_layer* layers, size_t count, emr_frame** out);
EMR_API emr_status emr_select_view(const double* angles_deg, size_t count, double target_deg, size_t* index);

/* ---- encoding selection ---- */
typedef enum emr_policy { EMR_POLICY_QOE = 0, EMR_POLICY_QOS = 1, EMR_POLICY_BALANCE = 2 } emr_policy;

typedef struct emr_level {
  const char* id;
  int scale_factor;
  int quant_step;
  double bits_per_frame;
} emr_level;

typedef struct emr_selection_params {
  double capacity;
  double base_delay;
  double loss_prob;
  double fps;
  double b0;
  double bmax;
  emr_policy policy;
  double w;
  double mos_min;
  double latency_min;
  double latency_max;
} emr_selection_params;

typedef struct emr_selection {
  size_t index;
  int degraded;
  double mos;
  double latency;
} emr_selection;

EMR_API emr_status emr_select_encoding(const emr_level* levels, size_t count, const emr_selection_params* params,
                                       emr_selection* out);

/* ---- secure tunnel over the built-in 61-bit group ---- */
typedef struct emr_registry emr_registry;
typedef struct emr_tunnel emr_tunnel;

EMR_API emr_status emr_keypair_gen(uint64_t seed, uint64_t* private_key, uint64_t* public_key);
EMR_API emr_status emr_fingerprint(uint64_t public_key, uint8_t out[32]);
EMR_API emr_status emr_registry_create(emr_registry** out);
EMR_API emr_status emr_registry_add(emr_registry* r, const uint8_t fingerprint[32]);
EMR_API void emr_registry_free(emr_registry* r);
EMR_API emr_status emr_tunnel_handshake(uint64_t local_private, uint64_t peer_public, const emr_registry* r,
                                        emr_tunnel** out);
/* wire is the serialized envelope. */
EMR_API emr_status emr_tunnel_encrypt(emr_tunnel* t, const uint8_t* payload, size_t size, emr_buffer** wire);
EMR_API emr_status emr_tunnel_decrypt(emr_tunnel* t, const emr_registry* r, const uint8_t* wire, size_t size,
                                      emr_buffer** payload);
EMR_API void emr_tunnel_free(emr_tunnel* t);

/* ---- knowledge store ---- */
typedef struct emr_store emr_store;
EMR_API emr_status emr_store_create(size_t shard_count, emr_store** out);
EMR_API emr_status emr_store_load(const char* dir, emr_store** out);
EMR_API emr_status emr_store_save(const emr_store* s, const char* dir);
EMR_API emr_status emr_store_enroll(emr_store* s, const char* user_id, const emr_frame* face);
/* user_id receives a NUL-terminated id, or "" when nothing is within theta. */
EMR_API emr_status emr_store_identify(const emr_store* s, const emr_frame* face, double theta, char* user_id,
                                      size_t capacity, double* distance);
EMR_API emr_status emr_store_rebalance(emr_store* s, size_t shard_count);
EMR_API emr_status emr_store_set_online(emr_store* s, size_t node, int online);
EMR_API size_t emr_store_user_count(const emr_store* s);
EMR_API void emr_store_free(emr_store* s);

/* ---- network simulation ---- */
typedef struct emr_link emr_link;
EMR_API emr_status emr_link_create(double capacity, double base_delay, double loss_prob, uint64_t seed, emr_link** out);
EMR_API emr_status emr_link_transmit(emr_link* l, double bits, double now, int* delivered, double* arrival);
EMR_API void emr_link_free(emr_link* l);

/* ---- pipeline ---- */
/* NULL / zero fields keep the value from the config file. */
typedef struct emr_run_options {
  const char* config_path;
  int has_seed;
  uint64_t seed;
  const char* policy;    /* qoe | qos | balance */
  const char* adversary; /* tamper | replay | impersonate | none */
  const char* out_dir;
  const char* metrics_path;
  int wall_clock; /* ms_total from measured stage times */
} emr_run_options;

typedef struct emr_run_summary {
  size_t frames;
  size_t outputs_written;
  size_t dropped;
  size_t alarms;
} emr_run_summary;

/* report, if non-NULL, receives the parser warnings as text. */
EMR_API emr_status emr_config_validate(const char* path, emr_buffer** report);
EMR_API emr_status emr_config_template(emr_buffer** out);
EMR_API emr_status emr_pipeline_run(const emr_run_options* options, emr_run_summary* summary);
EMR_API emr_status emr_generate_synthetic(const char* dir, int frames, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif /* EMR_EMR_H */
