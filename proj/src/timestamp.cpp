// SPDX-License-Identifier: Apache-2.0
#include "bzk/timestamp.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace bzk::tsa {

bytes token_message(const Digest64& digest, std::uint64_t t) {
  bytes msg(digest.begin(), digest.end());
  append_be64(msg, t);
  return msg;
}

bytes TimestampToken::encode() const {
  bytes out(digest.begin(), digest.end());
  append_be64(out, t);
  append_be32(out, static_cast<std::uint32_t>(sigma_t.size()));
  append_bytes(out, sigma_t);
  return out;
}

std::optional<TimestampToken> TimestampToken::decode(std::span<const std::uint8_t> data) {
  try {
    ByteReader r(data);
    TimestampToken tok;
    auto d = r.take(64);
    std::copy(d.begin(), d.end(), tok.digest.begin());
    tok.t = r.be64();
    std::uint32_t len = r.be32();
    tok.sigma_t = r.take_vec(len);
    if (!r.done()) return std::nullopt;
    return tok;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string TimestampToken::to_json() const {
  nlohmann::json j;
  j["digest"] = to_hex(digest);
  j["t"] = t;
  j["sigma_t"] = to_hex(sigma_t);
  return j.dump();
}

std::optional<TimestampToken> TimestampToken::from_json(const std::string& s) {
  try {
    nlohmann::json j = nlohmann::json::parse(s);
    TimestampToken tok;
    bytes d = from_hex(j.at("digest").get<std::string>());
    if (d.size() != 64) return std::nullopt;
    std::copy(d.begin(), d.end(), tok.digest.begin());
    tok.t = j.at("t").get<std::uint64_t>();
    tok.sigma_t = from_hex(j.at("sigma_t").get<std::string>());
    return tok;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

TimestampToken Authority::stamp(const Digest64& c_digest, RandomSource& rng) const {
  TimestampToken tok;
  tok.digest = c_digest;
  tok.t = clock_.now_ms();
  tok.sigma_t = sig::sign(keys_.sk, token_message(tok.digest, tok.t), rng)
                    .encode(keys_.pk.params);
  return tok;
}

bool verify_token(const TimestampToken& tok, const sig::PublicKey& pk_ts) {
  return sig::verify(pk_ts, std::span<const std::uint8_t>(tok.sigma_t),
                     token_message(tok.digest, tok.t));
}

}  // namespace bzk::tsa
