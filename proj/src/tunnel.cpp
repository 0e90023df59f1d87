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

#include "emr/tunnel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "emr/error.hpp"
#include "emr/prng.hpp"

namespace emr {

namespace {

constexpr double kWeyl = 0.6180339887498949;  // golden-ratio conjugate
constexpr double kEdge = 1e-12;

double wrap_into_band(double x) {
  while (!(x > 0.01 && x < 0.99)) x = std::fmod(x + kWeyl, 1.0);
  return x;
}

}  // namespace

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) noexcept {
  using u128 = unsigned __int128;
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) result = static_cast<std::uint64_t>(static_cast<u128>(result) * base % mod);
    base = static_cast<std::uint64_t>(static_cast<u128>(base) * base % mod);
    exp >>= 1;
  }
  return result;
}

void DhGroup::validate() const {
  if (p < 5) raise(ErrorCode::GroupTooSmall, "DH modulus must be >= 5");
  if (p >= (1ULL << 63)) raise(ErrorCode::InvalidParams, "DH modulus must be below 2^63");
  if (!(g > 1 && g < p)) raise(ErrorCode::InvalidParams, "DH generator must satisfy 1 < g < p");
}

std::size_t DhGroup::key_bytes() const noexcept { return (std::bit_width(p) + 7) / 8; }

std::vector<std::uint8_t> DhGroup::encode(std::uint64_t element) const {
  std::uint8_t buf[8];
  store_be64(element, buf);
  const std::size_t n = key_bytes();
  return {buf + (8 - n), buf + 8};
}

KeyPair keypair_gen(std::uint64_t seed, const DhGroup& group) {
  group.validate();
  Rng rng(seed);
  return keypair_from_private(rng.uniform_int(2, group.p - 2), group);
}

KeyPair keypair_from_private(std::uint64_t private_key, const DhGroup& group) {
  group.validate();
  if (private_key < 2 || private_key > group.p - 2) raise(ErrorCode::InvalidKey, "private exponent outside [2, p-2]");
  return {private_key, mod_pow(group.g, private_key, group.p)};
}

Digest fingerprint(std::uint64_t public_key, const DhGroup& group) {
  group.validate();
  if (public_key < 1 || public_key >= group.p) raise(ErrorCode::InvalidKey, "public key outside [1, p-1]");
  return sha256(group.encode(public_key));
}

AgentIdentity AgentIdentity::make(std::string id, AgentRole role, std::uint64_t public_key, const DhGroup& group) {
  return {std::move(id), role, public_key, emr::fingerprint(public_key, group)};
}

LogisticKeystream::LogisticKeystream(double x0, double r) : x_(x0), r_(r) {
  if (!(x0 > 0.0 && x0 < 1.0)) raise(ErrorCode::ReseedRequired, "chaos state must lie in (0,1)");
  if (!(r > 0.0 && r <= 4.0)) raise(ErrorCode::InvalidParams, "logistic parameter must lie in (0,4]");
}

double LogisticKeystream::step() {
  x_ = r_ * x_ * (1.0 - x_);
  if (x_ <= kEdge || x_ >= 1.0 - kEdge) raise(ErrorCode::ReseedRequired, "chaos state degenerated");
  return x_;
}

std::uint8_t LogisticKeystream::next_byte() {
  return static_cast<std::uint8_t>(std::min(255.0, std::floor(step() * 256.0)));
}

std::vector<std::uint8_t> Envelope::serialize() const {
  std::vector<std::uint8_t> out(32 + 8 + 4 + ciphertext.size() + 32);
  std::copy(sender.begin(), sender.end(), out.begin());
  store_be64(seq, out.data() + 32);
  store_be32(static_cast<std::uint32_t>(ciphertext.size()), out.data() + 40);
  std::copy(ciphertext.begin(), ciphertext.end(), out.begin() + 44);
  std::copy(digest.begin(), digest.end(), out.begin() + 44 + static_cast<std::ptrdiff_t>(ciphertext.size()));
  return out;
}

Envelope Envelope::parse(std::span<const std::uint8_t> wire) {
  if (wire.size() < 76) raise(ErrorCode::MalformedEnvelope, "envelope shorter than fixed fields");
  const std::uint32_t len = load_be32(wire.data() + 40);
  if (wire.size() != 76 + static_cast<std::size_t>(len))
    raise(ErrorCode::MalformedEnvelope, "envelope length field does not match size");
  Envelope e;
  std::copy_n(wire.begin(), 32, e.sender.begin());
  e.seq = load_be64(wire.data() + 32);
  e.ciphertext.assign(wire.begin() + 44, wire.begin() + 44 + len);
  std::copy_n(wire.begin() + 44 + len, 32, e.digest.begin());
  return e;
}

SessionTunnel::SessionTunnel(Digest local, Digest peer, std::uint64_t shared_secret, const DhGroup& group,
                             double chaos_seed, ChaosParams chaos)
    : local_(local), peer_(peer), shared_(shared_secret), group_(group), x0_(chaos_seed), chaos_(chaos) {
  if (!(chaos_seed > 0.0 && chaos_seed < 1.0)) raise(ErrorCode::ReseedRequired, "chaos seed must lie in (0,1)");
  if (chaos.burn_in < 0) raise(ErrorCode::InvalidParams, "burn-in must be >= 0");
  if (!(chaos.r > 0.0 && chaos.r <= 4.0)) raise(ErrorCode::InvalidParams, "logistic parameter must lie in (0,4]");
}

std::vector<std::uint8_t> SessionTunnel::keystream(std::uint64_t seq, std::size_t length) const {
  double start = x0_;
  if (seq > 1) start = wrap_into_band(std::fmod(x0_ + static_cast<double>((seq - 1) % (1ULL << 53)) * kWeyl, 1.0));
  LogisticKeystream ks(start, chaos_.r);
  for (int i = 0; i < chaos_.burn_in; ++i) ks.step();
  std::vector<std::uint8_t> out(length);
  for (auto& b : out) b = ks.next_byte();
  return out;
}

Digest SessionTunnel::envelope_digest(std::uint64_t seq, std::span<const std::uint8_t> ciphertext) const {
  std::vector<std::uint8_t> buf(8);
  store_be64(seq, buf.data());
  buf.insert(buf.end(), ciphertext.begin(), ciphertext.end());
  auto secret = group_.encode(shared_);
  buf.insert(buf.end(), secret.begin(), secret.end());
  return sha256(buf);
}

Envelope SessionTunnel::encrypt(std::span<const std::uint8_t> payload) {
  const std::uint64_t seq = send_seq_ + 1;
  auto ks = keystream(seq, payload.size());
  Envelope e;
  e.sender = local_;
  e.seq = seq;
  e.ciphertext.resize(payload.size());
  for (std::size_t i = 0; i < payload.size(); ++i) e.ciphertext[i] = payload[i] ^ ks[i];
  e.digest = envelope_digest(seq, e.ciphertext);
  send_seq_ = seq;
  return e;
}

std::vector<std::uint8_t> SessionTunnel::decrypt_verify(const Envelope& e, const Registry& registry) {
  if (!registry.contains(e.sender)) raise(ErrorCode::UnauthorizedAgent, "sender fingerprint not in registry");
  if (e.sender != peer_) raise(ErrorCode::UnauthorizedAgent, "sender is not the session peer");
  if (envelope_digest(e.seq, e.ciphertext) != e.digest) raise(ErrorCode::TamperAlarm, "envelope digest mismatch");
  if (e.seq <= recv_seq_)
    raise(ErrorCode::ReplayAlarm, "sequence " + std::to_string(e.seq) + " <= " + std::to_string(recv_seq_));
  auto ks = keystream(e.seq, e.ciphertext.size());
  std::vector<std::uint8_t> plain(e.ciphertext.size());
  for (std::size_t i = 0; i < plain.size(); ++i) plain[i] = e.ciphertext[i] ^ ks[i];
  recv_seq_ = e.seq;
  return plain;
}

double chaos_seed_from_secret(std::uint64_t shared_secret, const DhGroup& group) {
  auto material = group.encode(shared_secret);
  Digest h = sha256(material);
  for (std::uint32_t counter = 1;; ++counter) {
    const double x0 = static_cast<double>(load_be64(h.data())) * 0x1.0p-64;
    if (x0 > 0.01 && x0 < 0.99) return x0;
    std::vector<std::uint8_t> buf(material);
    buf.resize(buf.size() + 4);
    store_be32(counter, buf.data() + material.size());
    h = sha256(buf);
  }
}

SessionTunnel handshake(const KeyPair& local, std::uint64_t peer_public, const Registry& registry,
                        const DhGroup& group, ChaosParams chaos) {
  group.validate();
  const Digest peer_fp = fingerprint(peer_public, group);
  if (!registry.contains(peer_fp)) raise(ErrorCode::UnauthorizedAgent, "peer fingerprint not in registry");
  const Digest local_fp = fingerprint(local.public_key, group);
  const std::uint64_t shared = mod_pow(peer_public, local.private_key, group.p);
  return SessionTunnel(local_fp, peer_fp, shared, group, chaos_seed_from_secret(shared, group), chaos);
}

KeystreamStats keystream_stats(std::span<const std::uint8_t> bytes) {
  KeystreamStats s;
  if (bytes.empty()) return s;
  std::array<double, 256> hist{};
  double mean = 0.0;
  for (auto b : bytes) {
    hist[b] += 1.0;
    mean += b;
  }
  const double n = static_cast<double>(bytes.size());
  const double expected = n / 256.0;
  for (double h : hist) s.chi_square += (h - expected) * (h - expected) / expected;
  mean /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const double d = bytes[i] - mean;
    den += d * d;
    if (i + 1 < bytes.size()) num += d * (bytes[i + 1] - mean);
  }
  s.lag1_autocorrelation = den > 0.0 ? num / den : 0.0;
  return s;
}

}  // namespace emr
