// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "bzk/bytes.hpp"
#include "bzk/random.hpp"

namespace bzk::sig {

// Arithmetic over R_q = Z_q[X]/(X^n + 1) with the fixed transform-friendly
// pair n = 256, q = 8380417 (q ≡ 1 mod 2n, zeta = 1753 a primitive 512th
// root of unity). Coefficients are kept canonical in [0, q).
inline constexpr std::uint32_t kN = 256;
inline constexpr std::uint32_t kQ = 8380417;
inline constexpr std::uint32_t kZeta = 1753;

struct RingElement {
  std::vector<std::uint32_t> coeffs;

  RingElement() : coeffs(kN, 0) {}
  explicit RingElement(std::size_t n) : coeffs(n, 0) {}

  bool operator==(const RingElement& o) const = default;
};

using PolyVec = std::vector<RingElement>;
// Row-major k×l matrix of ring elements.
using PolyMat = std::vector<PolyVec>;

inline std::int32_t centered(std::uint32_t c) {
  return c > kQ / 2 ? static_cast<std::int32_t>(c) - static_cast<std::int32_t>(kQ)
                    : static_cast<std::int32_t>(c);
}

inline std::uint32_t canonical(std::int64_t v) {
  std::int64_t r = v % static_cast<std::int64_t>(kQ);
  if (r < 0) r += kQ;
  return static_cast<std::uint32_t>(r);
}

RingElement add(const RingElement& a, const RingElement& b);
RingElement sub(const RingElement& a, const RingElement& b);

// In-place negacyclic number-theoretic transform and inverse.
void ntt(RingElement& a);
void intt(RingElement& a);
RingElement pointwise(const RingElement& a, const RingElement& b);

// Transform-based product in R_q.
RingElement mult(const RingElement& a, const RingElement& b);

// O(n^2) negacyclic convolution, the oracle route for mult.
RingElement schoolbook_mult(const RingElement& a, const RingElement& b);

std::uint32_t infinity_norm(const RingElement& a);
std::uint32_t infinity_norm(const PolyVec& v);

RingElement uniform_element(RandomSource& rng, std::size_t n = kN);

// A·v for a k×l matrix with the matrix already in transform domain.
PolyVec mat_vec_ntt(const PolyMat& a_hat, const PolyVec& v);
PolyMat to_ntt(const PolyMat& a);
PolyVec to_ntt(const PolyVec& v);

}  // namespace bzk::sig
