// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>

#include "bzk/bytes.hpp"

namespace bzk {

using Digest32 = std::array<std::uint8_t, 32>;
using Digest64 = std::array<std::uint8_t, 64>;

Digest32 sha256(std::span<const std::uint8_t> data);
Digest64 sha512(std::span<const std::uint8_t> data);

inline bytes to_vec(const Digest32& d) { return bytes(d.begin(), d.end()); }
inline bytes to_vec(const Digest64& d) { return bytes(d.begin(), d.end()); }

// Incremental SHA-256/512 wrapper around the EVP interface.
class Hasher {
 public:
  enum class Alg { sha256, sha512 };

  explicit Hasher(Alg alg);
  ~Hasher();
  Hasher(const Hasher&) = delete;
  Hasher& operator=(const Hasher&) = delete;

  void update(std::span<const std::uint8_t> data);
  bytes finish();  // resets the context for reuse

 private:
  void* ctx_;
  Alg alg_;
};

}  // namespace bzk
