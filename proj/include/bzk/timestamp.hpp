// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "bzk/bytes.hpp"
#include "bzk/clock.hpp"
#include "bzk/hash.hpp"
#include "bzk/lattice_sig.hpp"
#include "bzk/random.hpp"

namespace bzk::tsa {

struct TimestampToken {
  Digest64 digest{};      // what was stamped
  std::uint64_t t = 0;    // receive time, unix ms
  bytes sigma_t;          // signature over (digest, t)

  bytes encode() const;
  static std::optional<TimestampToken> decode(std::span<const std::uint8_t> data);
  std::string to_json() const;
  static std::optional<TimestampToken> from_json(const std::string& s);
};

// Message actually signed: digest bytes followed by t as 8 big-endian bytes.
bytes token_message(const Digest64& digest, std::uint64_t t);

class Authority {
 public:
  Authority(sig::SigKeypair keys, Clock& clock) : keys_(std::move(keys)), clock_(clock) {}

  TimestampToken stamp(const Digest64& c_digest, RandomSource& rng) const;
  const sig::PublicKey& public_key() const { return keys_.pk; }

 private:
  sig::SigKeypair keys_;
  Clock& clock_;
};

bool verify_token(const TimestampToken& tok, const sig::PublicKey& pk_ts);

}  // namespace bzk::tsa
