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
#include <set>
#include <span>
#include <string>
#include <vector>

#include "emr/digest.hpp"

namespace emr {

// Protocol model for agent authentication and confidentiality checks. Not
// production cryptography: no forward secrecy, no padding, no side-channel
// hardening, and the keystream has a non-uniform byte distribution.

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) noexcept;

/// Finite-field Diffie-Hellman group, modulus below 2^63.
struct DhGroup {
  std::uint64_t p = 0;
  std::uint64_t g = 0;

  /// Throws GroupTooSmall for p < 5 and InvalidParams unless 1 < g < p.
  void validate() const;
  /// Width of the canonical big-endian key encoding.
  std::size_t key_bytes() const noexcept;
  std::vector<std::uint8_t> encode(std::uint64_t element) const;

  /// 61-bit safe prime p = 2q+1 with primitive root 2.
  static DhGroup desk61() noexcept { return {2305843009213691579ULL, 2}; }
};

struct KeyPair {
  std::uint64_t private_key = 0;
  std::uint64_t public_key = 0;
};

/// Private exponent uniform in [2, p-2] from a seeded mt19937_64.
KeyPair keypair_gen(std::uint64_t seed, const DhGroup& group);
KeyPair keypair_from_private(std::uint64_t private_key, const DhGroup& group);

/// Hash of the canonical fixed-width big-endian public key. InvalidKey unless key in [1, p-1].
Digest fingerprint(std::uint64_t public_key, const DhGroup& group);

enum class AgentRole { Human, Device, Combined };

struct AgentIdentity {
  std::string id;
  AgentRole role = AgentRole::Device;
  std::uint64_t public_key = 0;
  Digest fingerprint{};

  static AgentIdentity make(std::string id, AgentRole role, std::uint64_t public_key, const DhGroup& group);
};

/// Trusted agent fingerprints.
class Registry {
 public:
  void add(const Digest& d) { trusted_.insert(d); }
  bool contains(const Digest& d) const { return trusted_.count(d) != 0; }
  std::size_t size() const noexcept { return trusted_.size(); }
  bool empty() const noexcept { return trusted_.empty(); }

 private:
  std::set<Digest> trusted_;
};

struct ChaosParams {
  double r = 3.99;
  int burn_in = 1000;
};

/// Logistic map x <- r x (1 - x); each byte is floor(x*256) of the next state.
class LogisticKeystream {
 public:
  LogisticKeystream(double x0, double r);

  /// Advances once; throws ReseedRequired if x lands within 1e-12 of 0 or 1.
  double step();
  std::uint8_t next_byte();
  double state() const noexcept { return x_; }

 private:
  double x_;
  double r_;
};

struct Envelope {
  Digest sender{};
  std::uint64_t seq = 0;
  std::vector<std::uint8_t> ciphertext;
  Digest digest{};

  /// fingerprint(32) | seq(8, BE) | length(4, BE) | ciphertext | digest(32)
  std::vector<std::uint8_t> serialize() const;
  /// Throws MalformedEnvelope on short or inconsistent input.
  static Envelope parse(std::span<const std::uint8_t> wire);

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

/// One side of an authenticated session. Owned by one thread at a time.
///
/// Each envelope's keystream restarts from a sequence-indexed point derived
/// from the session seed, so the receiver stays in step when envelopes are
/// lost in transit. Sequence numbers start at 1.
class SessionTunnel {
 public:
  SessionTunnel(Digest local, Digest peer, std::uint64_t shared_secret, const DhGroup& group, double chaos_seed,
                ChaosParams chaos);

  const Digest& local_fingerprint() const noexcept { return local_; }
  const Digest& peer_fingerprint() const noexcept { return peer_; }
  std::uint64_t shared_secret() const noexcept { return shared_; }
  double chaos_seed() const noexcept { return x0_; }
  const ChaosParams& chaos() const noexcept { return chaos_; }
  std::uint64_t send_seq() const noexcept { return send_seq_; }
  std::uint64_t recv_seq() const noexcept { return recv_seq_; }

  Envelope encrypt(std::span<const std::uint8_t> payload);
  /// Checks registry, peer identity, digest and sequence, in that order. On
  /// any alarm the tunnel state is untouched and no plaintext is produced.
  std::vector<std::uint8_t> decrypt_verify(const Envelope& e, const Registry& registry);

  /// Keystream bytes used for envelope seq.
  std::vector<std::uint8_t> keystream(std::uint64_t seq, std::size_t length) const;

 private:
  Digest envelope_digest(std::uint64_t seq, std::span<const std::uint8_t> ciphertext) const;

  Digest local_;
  Digest peer_;
  std::uint64_t shared_;
  DhGroup group_;
  double x0_;
  ChaosParams chaos_;
  std::uint64_t send_seq_ = 0;
  std::uint64_t recv_seq_ = 0;
};

/// Derives (0.01, 0.99) chaos seed from the shared secret.
double chaos_seed_from_secret(std::uint64_t shared_secret, const DhGroup& group);

/// UnauthorizedAgent unless fingerprint(peer_public) is trusted.
SessionTunnel handshake(const KeyPair& local, std::uint64_t peer_public, const Registry& registry,
                        const DhGroup& group, ChaosParams chaos = {});

inline Envelope encrypt_envelope(SessionTunnel& t, std::span<const std::uint8_t> payload) { return t.encrypt(payload); }
inline std::vector<std::uint8_t> decrypt_verify(SessionTunnel& t, const Envelope& e, const Registry& r) {
  return t.decrypt_verify(e, r);
}

struct KeystreamStats {
  double chi_square = 0.0;        // byte histogram vs uniform, 255 dof
  double lag1_autocorrelation = 0.0;
};

KeystreamStats keystream_stats(std::span<const std::uint8_t> bytes);

}  // namespace emr
