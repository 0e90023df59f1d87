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

#include "emr/netsim.hpp"

#include <cmath>

#include "emr/error.hpp"

namespace emr {

Link::Link(const LinkParams& params) : params_(params), rng_(params.seed) {
  if (!(params.capacity > 0.0)) raise(ErrorCode::InvalidChannel, "link capacity must be > 0");
  if (!(params.base_delay >= 0.0)) raise(ErrorCode::InvalidChannel, "link delay must be >= 0");
  if (!(params.loss_prob >= 0.0 && params.loss_prob <= 1.0)) raise(ErrorCode::InvalidChannel, "loss_prob must be in [0,1]");
}

Delivery Link::transmit(double payload_bits, double now) {
  if (!(payload_bits >= 0.0)) raise(ErrorCode::InvalidPayload, "payload bits must be >= 0");
  if (rng_.uniform() < params_.loss_prob) return {false, 0.0};
  return {true, now + params_.base_delay + payload_bits / params_.capacity};
}

AdversaryMode parse_adversary(const std::string& s) {
  if (s == "none") return AdversaryMode::None;
  if (s == "tamper") return AdversaryMode::Tamper;
  if (s == "replay") return AdversaryMode::Replay;
  if (s == "impersonate") return AdversaryMode::Impersonate;
  raise(ErrorCode::InvalidValue, "adversary must be tamper, replay, impersonate or none, got '" + s + "'");
}

const char* adversary_name(AdversaryMode m) noexcept {
  switch (m) {
    case AdversaryMode::None: return "none";
    case AdversaryMode::Tamper: return "tamper";
    case AdversaryMode::Replay: return "replay";
    case AdversaryMode::Impersonate: return "impersonate";
  }
  return "?";
}

Adversary::Adversary(std::string node_id, AdversaryMode mode, std::uint64_t seed, Digest own_fingerprint)
    : node_id_(std::move(node_id)), mode_(mode), rng_(seed), own_(own_fingerprint) {}

std::vector<Envelope> Adversary::interpose(const Envelope& e) {
  switch (mode_) {
    case AdversaryMode::None:
      return {e};
    case AdversaryMode::Tamper: {
      Envelope t = e;
      if (!t.ciphertext.empty()) {
        const std::uint64_t bit = rng_.uniform_int(0, t.ciphertext.size() * 8 - 1);
        t.ciphertext[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      }
      return {t};
    }
    case AdversaryMode::Replay: {
      std::vector<Envelope> out;
      if (last_) out.push_back(*last_);
      out.push_back(e);
      last_ = e;
      return out;
    }
    case AdversaryMode::Impersonate: {
      Envelope t = e;
      t.sender = own_;
      return {t};
    }
  }
  return {e};
}

void EventLoop::schedule(double time, Handler h) {
  if (!std::isfinite(time) || time < now_) raise(ErrorCode::InvalidParams, "events cannot be scheduled in the past");
  queue_.push(Event{time, next_order_++, std::move(h)});
}

std::size_t EventLoop::run() {
  std::size_t fired = 0;
  while (!queue_.empty()) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time;
    ev.handler(now_);
    ++fired;
  }
  return fired;
}

}  // namespace emr
