// SPDX-License-Identifier: Apache-2.0
//
// Byte helpers, hashing, randomness sources, and the UTC clock utilities.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <set>

#include "bzk/bytes.hpp"
#include "bzk/clock.hpp"
#include "bzk/hash.hpp"
#include "bzk/random.hpp"

using namespace bzk;

namespace {

bytes str_bytes(const char* s) {
  return bytes(reinterpret_cast<const std::uint8_t*>(s), reinterpret_cast<const std::uint8_t*>(s) + std::strlen(s));
}

}  // namespace

TEST_CASE("hex round trip and error handling") {
  bytes data = {0x00, 0x01, 0x7f, 0x80, 0xff, 0xab};
  CHECK(to_hex(data) == "00017f80ffab");
  CHECK(from_hex("00017f80ffab") == data);
  CHECK(from_hex("00017F80FFAB") == data);
  CHECK(from_hex("").empty());
  CHECK_THROWS_AS(from_hex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(from_hex("zz"), std::invalid_argument);
}

TEST_CASE("big and little endian stores agree with known layouts") {
  std::uint8_t buf[8];
  store_be32(buf, 0x01020304u);
  CHECK(buf[0] == 0x01);
  CHECK(buf[3] == 0x04);
  CHECK(load_be32(buf) == 0x01020304u);

  store_le32(buf, 0x01020304u);
  CHECK(buf[0] == 0x04);
  CHECK(buf[3] == 0x01);
  CHECK(load_le32(buf) == 0x01020304u);

  store_be64(buf, 0x0102030405060708ull);
  CHECK(buf[0] == 0x01);
  CHECK(buf[7] == 0x08);
  CHECK(load_be64(buf) == 0x0102030405060708ull);

  bytes out;
  append_be32(out, 0xdeadbeefu);
  append_be64(out, 1);
  append_le32(out, 2);
  REQUIRE(out.size() == 16);
  CHECK(out[0] == 0xde);
  CHECK(out[11] == 0x01);
  CHECK(out[12] == 0x02);
}

TEST_CASE("ByteReader walks a buffer and refuses to overrun") {
  bytes buf;
  append_be32(buf, 7);
  append_be64(buf, 0xffffffffffffffffull);
  append_bytes(buf, str_bytes("xy"));

  ByteReader r(buf);
  CHECK(r.be32() == 7);
  CHECK(r.be64() == 0xffffffffffffffffull);
  CHECK(r.remaining() == 2);
  CHECK(r.take_vec(2) == str_bytes("xy"));
  CHECK(r.done());
  CHECK_THROWS_AS(r.take(1), std::out_of_range);

  ByteReader r2(buf);
  CHECK_THROWS_AS(r2.take(buf.size() + 1), std::out_of_range);
}

TEST_CASE("BitVec is LSB-first within bytes") {
  BitVec v(12);
  v.set(0, true);
  v.set(9, true);
  v.set(11, true);
  CHECK(v.get(0));
  CHECK_FALSE(v.get(1));
  CHECK(v.get(9));

  bytes packed = v.to_bytes();
  REQUIRE(packed.size() == 2);
  CHECK(packed[0] == 0x01);
  CHECK(packed[1] == 0x0a);

  BitVec back = BitVec::from_bytes(packed, 12);
  CHECK(back == v);
}

TEST_CASE("BitVec from_bytes ignores bits beyond the declared length") {
  bytes packed = {0xff, 0xff};
  BitVec v = BitVec::from_bytes(packed, 11);
  CHECK(v.size() == 11);
  for (std::uint64_t i = 0; i < 11; ++i) CHECK(v.get(i));
  // tail bits must be cleared so equality on words() is meaningful
  CHECK(v.words()[0] == 0x7ff);
  CHECK_THROWS_AS(BitVec::from_bytes(packed, 17), std::invalid_argument);
}

TEST_CASE("SHA-256 and SHA-512 known answers") {
  CHECK(to_hex(sha256(str_bytes("abc"))) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(to_hex(sha256(bytes{})) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(to_hex(sha512(str_bytes("abc"))) ==
        "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a"
        "2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f");
  CHECK(to_hex(sha512(bytes{})) ==
        "cf83e1357eefb8bdf1542850d66d8007d620e4050b5715dc83f4a921d36ce9ce"
        "47d0d13c5d85f2b0ff8318d2877eec2f63b931bd47417a81a538327af927da3e");
}

TEST_CASE("incremental hasher matches one-shot digests and resets cleanly") {
  Hasher h(Hasher::Alg::sha256);
  h.update(str_bytes("a"));
  h.update(str_bytes("b"));
  h.update(str_bytes("c"));
  CHECK(h.finish() == to_vec(sha256(str_bytes("abc"))));
  // context resets after finish
  h.update(str_bytes("abc"));
  CHECK(h.finish() == to_vec(sha256(str_bytes("abc"))));

  Hasher h512(Hasher::Alg::sha512);
  h512.update(str_bytes("abc"));
  CHECK(h512.finish() == to_vec(sha512(str_bytes("abc"))));
}

TEST_CASE("CounterDrbg expands as SHA-512 over seed plus counter") {
  bytes seed = str_bytes("drbg seed");
  CounterDrbg drbg(seed);
  bytes got = drbg.get(100);

  bytes expect;
  for (std::uint64_t i = 0; expect.size() < 100; ++i) {
    bytes msg = seed;
    append_be64(msg, i);
    append_bytes(expect, sha512(msg));
  }
  expect.resize(100);
  CHECK(got == expect);

  // same seed replays, different seed diverges
  CounterDrbg again(seed);
  CHECK(again.get(100) == got);
  CounterDrbg other(str_bytes("other seed"));
  CHECK(other.get(100) != got);
}

TEST_CASE("OsRandom produces distinct non-degenerate draws") {
  OsRandom rng;
  bytes a = rng.get(32);
  bytes b = rng.get(32);
  CHECK(a != b);
  CHECK(a != bytes(32, 0));
}

TEST_CASE("below and range respect their bounds") {
  Mt19937Source rng(42);
  std::array<int, 3> counts{};
  for (int i = 0; i < 30000; ++i) {
    std::uint64_t v = rng.below(3);
    REQUIRE(v < 3);
    ++counts[v];
  }
  // 4 sigma window around 10000 for p = 1/3
  for (int c : counts) CHECK(std::abs(c - 10000) < 700);

  for (int i = 0; i < 1000; ++i) {
    std::int64_t v = rng.range(-5, 5);
    REQUIRE(v >= -5);
    REQUIRE(v <= 5);
    double u = rng.unit_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  CHECK(rng.below(1) == 0);
}

TEST_CASE("Mt19937Source is deterministic per seed") {
  Mt19937Source a(7), b(7), c(8);
  CHECK(a.get(64) == b.get(64));
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.get(16) != c.get(16));
}

TEST_CASE("RFC 3339 formatting anchors and round trips") {
  CHECK(rfc3339_utc_ms(0) == "1970-01-01T00:00:00.000Z");
  CHECK(rfc3339_utc_ms(1700000000000ull) == "2023-11-14T22:13:20.000Z");
  CHECK(rfc3339_utc_ms(1700000000123ull) == "2023-11-14T22:13:20.123Z");

  for (const char* s : {"2024-02-29T12:34:56.789Z", "1999-12-31T23:59:59.999Z",
                        "2038-01-19T03:14:07.000Z"}) {
    CHECK(rfc3339_utc_ms(parse_rfc3339_utc_ms(s)) == s);
  }
  for (std::uint64_t ms : {0ull, 999ull, 1700000000123ull, 4102444799999ull}) {
    CHECK(parse_rfc3339_utc_ms(rfc3339_utc_ms(ms)) == ms);
  }
}

TEST_CASE("RFC 3339 parser rejects malformed input") {
  CHECK_THROWS(parse_rfc3339_utc_ms(""));
  CHECK_THROWS(parse_rfc3339_utc_ms("2023-11-14 22:13:20.000Z"));
  CHECK_THROWS(parse_rfc3339_utc_ms("2023-11-14T22:13:20.000"));
  CHECK_THROWS(parse_rfc3339_utc_ms("2023-11-14T22:13:20.000Zx"));
  CHECK_THROWS(parse_rfc3339_utc_ms("2023-13-01T00:00:00.000Z"));
  CHECK_THROWS(parse_rfc3339_utc_ms("not a timestamp"));
}

TEST_CASE("utc_parts decomposes correctly") {
  UtcParts p = utc_parts(1700000000123ull);
  CHECK(p.year == 2023);
  CHECK(p.month == 11);
  CHECK(p.day == 14);
  CHECK(p.hour == 22);
  CHECK(p.minute == 13);
  CHECK(p.second == 20);
  CHECK(p.millisecond == 123);
}

TEST_CASE("clocks behave") {
  ManualClock mc(100);
  CHECK(mc.now_ms() == 100);
  mc.advance(50);
  CHECK(mc.now_ms() == 150);
  mc.set(1);
  CHECK(mc.now_ms() == 1);

  SystemClock sc;
  std::uint64_t now = sc.now_ms();
  // sanity: after 2020-01-01, before 2100
  CHECK(now > 1577836800000ull);
  CHECK(now < 4102444800000ull);
}
