// SPDX-License-Identifier: Apache-2.0
#include "bzk/commitment.hpp"

#include <stdexcept>

namespace bzk::commit {

bytes Decommitment::encode() const {
  if (key.size() != kKeyLen) throw std::invalid_argument("Decommitment: bad key length");
  if (payload.empty() || payload.size() > 255)
    throw std::invalid_argument("Decommitment: payload length must be in [1,255]");
  bytes out = key;
  out.push_back(static_cast<std::uint8_t>(payload.size()));
  append_bytes(out, payload);
  return out;
}

Decommitment Decommitment::decode(std::span<const std::uint8_t> data) {
  ByteReader r(data);
  Decommitment d;
  d.key = r.take_vec(kKeyLen);
  std::uint8_t len;
  std::memcpy(&len, r.take(1).data(), 1);
  d.payload = r.take_vec(len);
  if (!r.done()) throw std::invalid_argument("Decommitment: trailing bytes");
  return d;
}

std::pair<Commitment, Decommitment> commit(std::span<const std::uint8_t> payload,
                                           RandomSource& rng) {
  if (payload.empty()) throw std::invalid_argument("commit: empty payload");
  Decommitment d;
  d.key = rng.get(kKeyLen);
  d.payload.assign(payload.begin(), payload.end());

  Hasher h(Hasher::Alg::sha256);
  h.update(d.key);
  h.update(d.payload);
  bytes dig = h.finish();
  Commitment c;
  std::copy(dig.begin(), dig.end(), c.digest.begin());
  return {c, std::move(d)};
}

bool open(const Commitment& c, const Decommitment& d) {
  if (d.key.size() != kKeyLen || d.payload.empty()) return false;
  Hasher h(Hasher::Alg::sha256);
  h.update(d.key);
  h.update(d.payload);
  bytes dig = h.finish();
  return std::equal(dig.begin(), dig.end(), c.digest.begin());
}

}  // namespace bzk::commit
