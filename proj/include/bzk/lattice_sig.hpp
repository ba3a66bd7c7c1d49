// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "bzk/ring.hpp"

namespace bzk::sig {

struct SigParams {
  std::uint32_t n = 256;
  std::uint32_t q = 8380417;
  std::uint32_t k = 5;
  std::uint32_t l = 4;
  std::uint32_t eta = 2;
  std::uint32_t gamma1 = 1u << 17;
  std::uint32_t gamma2 = (8380417 - 1) / 32;
  std::uint32_t tau = 60;
  std::uint32_t beta = 120;

  void validate() const;
  bool operator==(const SigParams&) const = default;
};

struct PublicKey {
  SigParams params;
  PolyMat a;   // k×l
  PolyVec t;   // k

  // transform-domain copy of a, rebuilt on construction/decode
  PolyMat a_hat;

  void cache();
  bytes encode() const;
  static PublicKey decode(std::span<const std::uint8_t> data);
};

struct SecretKey {
  PublicKey pk;
  PolyVec s1;  // l
  PolyVec s2;  // k

  PolyVec s1_hat, s2_hat;

  void cache();
  bytes encode() const;
  static SecretKey decode(std::span<const std::uint8_t> data);
};

struct SigKeypair {
  PublicKey pk;
  SecretKey sk;
};

struct Signature {
  PolyVec z;  // l, coefficients canonical
  bytes c;    // 64-byte challenge digest

  bytes encode(const SigParams& params) const;
  static std::optional<Signature> decode(std::span<const std::uint8_t> data,
                                         const SigParams& params);
};

// Euclidean decomposition r = alpha*highbits + lowbits on canonical inputs.
std::uint32_t highbits(std::uint32_t r, std::uint32_t alpha);
std::uint32_t lowbits(std::uint32_t r, std::uint32_t alpha);
RingElement highbits(const RingElement& r, std::uint32_t alpha);
PolyVec highbits(const PolyVec& v, std::uint32_t alpha);

// Deterministic expansion of the challenge digest into a ring element with
// tau coefficients in {-1,+1} (stored canonical) and the rest zero.
RingElement sample_in_ball(std::span<const std::uint8_t> digest, const SigParams& params);

SigKeypair keygen(const SigParams& params, RandomSource& rng);

// Optional instrumentation filled in by sign for property tests.
struct SignTrace {
  std::uint32_t attempts = 0;
  PolyVec w;   // A·y of the accepted attempt
  PolyVec w1;  // highbits(w, 2*gamma2)
};

Signature sign(const SecretKey& sk, std::span<const std::uint8_t> mu, RandomSource& rng,
               SignTrace* trace = nullptr);

bool verify(const PublicKey& pk, const Signature& sig, std::span<const std::uint8_t> mu);
// Total over wire bytes: malformed encodings return false.
bool verify(const PublicKey& pk, std::span<const std::uint8_t> sig_bytes,
            std::span<const std::uint8_t> mu);

inline constexpr std::uint32_t kSignIterationCap = 1000;

}  // namespace bzk::sig
