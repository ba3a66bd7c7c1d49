// SPDX-License-Identifier: Apache-2.0
//
// Keyed hash commitments: binding to key and payload, wire format, and the
// frozen digest construction.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "bzk/commitment.hpp"

using namespace bzk;
using namespace bzk::commit;

TEST_CASE("commit and open roundtrip") {
  OsRandom rng;
  bytes payload = {1, 2, 3};
  auto [c, d] = commit::commit(payload, rng);
  CHECK(d.payload == payload);
  CHECK(d.key.size() == kKeyLen);
  CHECK(open(c, d));
}

TEST_CASE("digest is SHA-256 over key then payload") {
  // pinned construction: zero key, single byte 0x01
  Decommitment d;
  d.key = bytes(kKeyLen, 0);
  d.payload = {0x01};
  Commitment c;
  auto dig = from_hex("1fd4247443c9440cb3c48c28851937196bc156032d70a96c98e127ecb347e45f");
  std::copy(dig.begin(), dig.end(), c.digest.begin());
  CHECK(open(c, d));

  bytes msg = d.key;
  msg.push_back(0x01);
  CHECK(to_vec(sha256(msg)) == dig);
}

TEST_CASE("opening fails under any tamper") {
  OsRandom rng;
  bytes payload = {0xde, 0xad};
  auto [c, d] = commit::commit(payload, rng);

  Decommitment wrong_key = d;
  wrong_key.key[5] ^= 1;
  CHECK_FALSE(open(c, wrong_key));

  Decommitment wrong_payload = d;
  wrong_payload.payload[0] ^= 1;
  CHECK_FALSE(open(c, wrong_payload));

  Decommitment longer = d;
  longer.payload.push_back(0);
  CHECK_FALSE(open(c, longer));

  Commitment other = c;
  other.digest[0] ^= 1;
  CHECK_FALSE(open(other, d));

  Decommitment short_key = d;
  short_key.key.pop_back();
  CHECK_FALSE(open(c, short_key));
}

TEST_CASE("fresh keys hide equal payloads") {
  OsRandom rng;
  bytes payload = {7};
  auto [c1, d1] = commit::commit(payload, rng);
  auto [c2, d2] = commit::commit(payload, rng);
  CHECK(d1.key != d2.key);
  CHECK_FALSE(c1 == c2);
}

TEST_CASE("decommitment wire format") {
  OsRandom rng;
  bytes payload = {9, 8, 7, 6};
  auto [c, d] = commit::commit(payload, rng);

  bytes wire = d.encode();
  REQUIRE(wire.size() == kKeyLen + 1 + payload.size());
  CHECK(wire[kKeyLen] == payload.size());

  Decommitment back = Decommitment::decode(wire);
  CHECK(back.key == d.key);
  CHECK(back.payload == d.payload);
  CHECK(open(c, back));

  bytes trailing = wire;
  trailing.push_back(0);
  CHECK_THROWS_AS(Decommitment::decode(trailing), std::invalid_argument);
  bytes cut(wire.begin(), wire.end() - 1);
  CHECK_THROWS_AS(Decommitment::decode(cut), std::out_of_range);
}

TEST_CASE("payload length limits") {
  OsRandom rng;
  CHECK_THROWS_AS(commit::commit(bytes{}, rng), std::invalid_argument);

  bytes max_payload(255, 0x11);
  auto [c, d] = commit::commit(max_payload, rng);
  CHECK(open(c, d));
  CHECK(Decommitment::decode(d.encode()).payload.size() == 255);

  Decommitment too_long = d;
  too_long.payload.resize(256, 0);
  CHECK_THROWS_AS(too_long.encode(), std::invalid_argument);
}
