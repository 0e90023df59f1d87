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

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "emr/prng.hpp"
#include "emr/tunnel.hpp"

namespace emr {

struct LinkParams {
  std::string from = "sender";
  std::string to = "receiver";
  double capacity = 1e7;  // bits/s
  double base_delay = 0.0;
  double loss_prob = 0.0;
  std::uint64_t seed = 0;
};

struct Delivery {
  bool delivered = false;
  double arrival = 0.0;  // meaningful only when delivered
};

/// Direct link with its own seeded loss process.
class Link {
 public:
  explicit Link(const LinkParams& params);

  const LinkParams& params() const noexcept { return params_; }

  /// One loss draw per call, then arrival = now + base_delay + bits/capacity.
  Delivery transmit(double payload_bits, double now);

 private:
  LinkParams params_;
  Rng rng_;
};

enum class AdversaryMode { None, Tamper, Replay, Impersonate };

AdversaryMode parse_adversary(const std::string& s);
const char* adversary_name(AdversaryMode m) noexcept;

/// In-path attacker sitting on a link.
class Adversary {
 public:
  Adversary(std::string node_id, AdversaryMode mode, std::uint64_t seed, Digest own_fingerprint);

  AdversaryMode mode() const noexcept { return mode_; }

  /// TAMPER flips one uniformly chosen ciphertext bit (empty ciphertext passes
  /// unchanged); IMPERSONATE rewrites the sender fingerprint; REPLAY forwards
  /// the envelope and re-injects the previously seen one ahead of it.
  std::vector<Envelope> interpose(const Envelope& e);

 private:
  std::string node_id_;
  AdversaryMode mode_;
  Rng rng_;
  Digest own_;
  std::optional<Envelope> last_;
};

/// Single-threaded discrete-event loop ordered by (time, insertion order).
class EventLoop {
 public:
  using Handler = std::function<void(double now)>;

  void schedule(double time, Handler h);
  /// Runs until the queue is empty; returns the number of events fired.
  std::size_t run();
  double now() const noexcept { return now_; }

 private:
  struct Event {
    double time;
    std::uint64_t order;
    Handler handler;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.order > b.order;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_order_ = 0;
  double now_ = 0.0;
};

}  // namespace emr
