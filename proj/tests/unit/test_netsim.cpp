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

#include "doctest.h"
#include "emr/error.hpp"
#include "emr/netsim.hpp"
#include "oracles/frozen_values.hpp"

using namespace emr;

namespace {

SessionTunnel loopback(Registry& r, KeyPair& a, KeyPair& b) {
  const DhGroup g = DhGroup::desk61();
  a = keypair_gen(71, g);
  b = keypair_gen(72, g);
  r.add(fingerprint(a.public_key, g));
  r.add(fingerprint(b.public_key, g));
  return handshake(a, b.public_key, r, g);
}

}  // namespace

TEST_CASE("transmit") {
  Link lossless({"a", "b", 1e7, 0.01, 0.0, 1});
  for (int i = 0; i < 1000; ++i) REQUIRE(lossless.transmit(100, 0).delivered);
  const Delivery d = lossless.transmit(1e6, 0.0);
  CHECK(d.arrival == doctest::Approx(oracle::kArrivalExample));

  Link lossy({"a", "b", 1e7, 0.01, 1.0, 1});
  for (int i = 0; i < 1000; ++i) REQUIRE_FALSE(lossy.transmit(100, 0).delivered);

  CHECK_THROWS_AS(lossless.transmit(-1, 0), Error);
  CHECK_THROWS_AS(Link({"a", "b", 0.0, 0.0, 0.0, 1}), Error);
  CHECK_THROWS_AS(Link({"a", "b", 1.0, 0.0, 1.5, 1}), Error);
}

TEST_CASE("transmit traces are reproducible") {
  Link a({"a", "b", 1e6, 0.0, 0.3, 99}), b({"a", "b", 1e6, 0.0, 0.3, 99});
  for (int i = 0; i < 2000; ++i) {
    const Delivery x = a.transmit(i, i * 0.001), y = b.transmit(i, i * 0.001);
    REQUIRE(x.delivered == y.delivered);
    REQUIRE(x.arrival == y.arrival);
  }
}

TEST_CASE("adversary modes") {
  Registry r;
  KeyPair a, b;
  SessionTunnel tx = loopback(r, a, b);
  SessionTunnel rx = handshake(b, a.public_key, r, DhGroup::desk61());
  const Digest mallory = fingerprint(keypair_gen(73, DhGroup::desk61()).public_key, DhGroup::desk61());
  const std::vector<std::uint8_t> msg(40, 0x5a);

  Adversary tamper("m", AdversaryMode::Tamper, 5, mallory);
  for (int i = 0; i < 200; ++i) {
    const Envelope e = tx.encrypt(msg);
    const auto out = tamper.interpose(e);
    REQUIRE(out.size() == 1);
    int diff_bits = 0;
    for (std::size_t k = 0; k < msg.size(); ++k) diff_bits += __builtin_popcount(out[0].ciphertext[k] ^ e.ciphertext[k]);
    REQUIRE(diff_bits == 1);
    try {
      rx.decrypt_verify(out[0], r);
      FAIL("tamper not detected");
    } catch (const Error& err) {
      REQUIRE(err.code() == ErrorCode::TamperAlarm);
    }
  }
  const Envelope empty = tx.encrypt({});
  CHECK(tamper.interpose(empty)[0] == empty);

  Adversary replay("m", AdversaryMode::Replay, 5, mallory);
  const Envelope e1 = tx.encrypt(msg);
  CHECK(replay.interpose(e1).size() == 1);
  CHECK(rx.decrypt_verify(e1, r) == msg);
  const Envelope e2 = tx.encrypt(msg);
  const auto pair = replay.interpose(e2);
  REQUIRE(pair.size() == 2);
  CHECK(pair[0] == e1);
  try {
    rx.decrypt_verify(pair[0], r);
    FAIL("replay not detected");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ReplayAlarm);
  }
  CHECK(rx.decrypt_verify(pair[1], r) == msg);

  Adversary imp("m", AdversaryMode::Impersonate, 5, mallory);
  const auto forged = imp.interpose(tx.encrypt(msg));
  CHECK(forged[0].sender == mallory);
  try {
    rx.decrypt_verify(forged[0], r);
    FAIL("impersonation not detected");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::UnauthorizedAgent);
  }

  CHECK(parse_adversary("tamper") == AdversaryMode::Tamper);
  CHECK(std::string(adversary_name(AdversaryMode::Replay)) == "replay");
  CHECK_THROWS_AS(parse_adversary("sniff"), Error);
}

TEST_CASE("event loop order") {
  EventLoop loop;
  std::vector<int> seen;
  loop.schedule(2.0, [&](double) { seen.push_back(3); });
  loop.schedule(1.0, [&](double) { seen.push_back(1); });
  loop.schedule(1.0, [&](double now) {
    seen.push_back(2);
    loop.schedule(now, [&](double) { seen.push_back(22); });
  });
  CHECK(loop.run() == 4);
  CHECK(seen == std::vector<int>{1, 2, 22, 3});
  CHECK(loop.now() == 2.0);
  CHECK_THROWS_AS(loop.schedule(1.0, [](double) {}), Error);
}
