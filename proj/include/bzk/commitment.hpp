// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <utility>

#include "bzk/hash.hpp"
#include "bzk/random.hpp"

namespace bzk::commit {

inline constexpr std::size_t kKeyLen = 32;

struct Commitment {
  Digest32 digest{};

  bool operator==(const Commitment&) const = default;
};

struct Decommitment {
  bytes key;      // exactly 32 bytes
  bytes payload;  // committed bytes

  // key || 1-byte payload length || payload
  bytes encode() const;
  static Decommitment decode(std::span<const std::uint8_t> data);
};

std::pair<Commitment, Decommitment> commit(std::span<const std::uint8_t> payload,
                                           RandomSource& rng);

bool open(const Commitment& c, const Decommitment& d);

}  // namespace bzk::commit
