// SPDX-License-Identifier: Apache-2.0
#include "bzk/ring.hpp"

#include <stdexcept>

namespace bzk::sig {

namespace {

std::uint32_t mulmod(std::uint32_t a, std::uint32_t b) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % kQ);
}

std::uint32_t addmod(std::uint32_t a, std::uint32_t b) {
  std::uint32_t s = a + b;
  return s >= kQ ? s - kQ : s;
}

std::uint32_t submod(std::uint32_t a, std::uint32_t b) { return a >= b ? a - b : a + kQ - b; }

std::uint32_t powmod(std::uint32_t base, std::uint32_t exp) {
  std::uint64_t r = 1, b = base;
  while (exp) {
    if (exp & 1) r = (r * b) % kQ;
    b = (b * b) % kQ;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

struct Tables {
  std::uint32_t zetas[kN];
  std::uint32_t inv_n;

  Tables() {
    auto brv8 = [](std::uint32_t x) {
      std::uint32_t r = 0;
      for (int i = 0; i < 8; ++i) r |= ((x >> i) & 1) << (7 - i);
      return r;
    };
    for (std::uint32_t i = 0; i < kN; ++i) zetas[i] = powmod(kZeta, brv8(i));
    inv_n = powmod(kN, kQ - 2);
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

RingElement add(const RingElement& a, const RingElement& b) {
  RingElement r(a.coeffs.size());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[i] = addmod(a.coeffs[i], b.coeffs[i]);
  return r;
}

RingElement sub(const RingElement& a, const RingElement& b) {
  RingElement r(a.coeffs.size());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[i] = submod(a.coeffs[i], b.coeffs[i]);
  return r;
}

void ntt(RingElement& a) {
  const auto& tb = tables();
  std::uint32_t* c = a.coeffs.data();
  std::size_t k = 0;
  for (std::size_t len = kN / 2; len > 0; len >>= 1) {
    for (std::size_t start = 0; start < kN; start += 2 * len) {
      std::uint32_t zeta = tb.zetas[++k];
      for (std::size_t j = start; j < start + len; ++j) {
        std::uint32_t t = mulmod(zeta, c[j + len]);
        c[j + len] = submod(c[j], t);
        c[j] = addmod(c[j], t);
      }
    }
  }
}

void intt(RingElement& a) {
  const auto& tb = tables();
  std::uint32_t* c = a.coeffs.data();
  std::size_t k = kN;
  for (std::size_t len = 1; len < kN; len <<= 1) {
    for (std::size_t start = 0; start < kN; start += 2 * len) {
      std::uint32_t zeta = kQ - tb.zetas[--k];
      for (std::size_t j = start; j < start + len; ++j) {
        std::uint32_t t = c[j];
        c[j] = addmod(t, c[j + len]);
        c[j + len] = mulmod(zeta, submod(t, c[j + len]));
      }
    }
  }
  for (std::size_t j = 0; j < kN; ++j) c[j] = mulmod(c[j], tb.inv_n);
}

RingElement pointwise(const RingElement& a, const RingElement& b) {
  RingElement r(a.coeffs.size());
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[i] = mulmod(a.coeffs[i], b.coeffs[i]);
  return r;
}

RingElement mult(const RingElement& a, const RingElement& b) {
  RingElement ah = a, bh = b;
  ntt(ah);
  ntt(bh);
  RingElement r = pointwise(ah, bh);
  intt(r);
  return r;
}

RingElement schoolbook_mult(const RingElement& a, const RingElement& b) {
  const std::size_t n = a.coeffs.size();
  if (b.coeffs.size() != n) throw std::invalid_argument("schoolbook_mult: size mismatch");
  RingElement r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      std::uint32_t prod = mulmod(a.coeffs[i], b.coeffs[j]);
      std::size_t idx = i + j;
      if (idx < n)
        r.coeffs[idx] = addmod(r.coeffs[idx], prod);
      else
        r.coeffs[idx - n] = submod(r.coeffs[idx - n], prod);
    }
  }
  return r;
}

std::uint32_t infinity_norm(const RingElement& a) {
  std::uint32_t m = 0;
  for (auto c : a.coeffs) {
    std::int32_t v = centered(c);
    std::uint32_t av = static_cast<std::uint32_t>(v < 0 ? -v : v);
    if (av > m) m = av;
  }
  return m;
}

std::uint32_t infinity_norm(const PolyVec& v) {
  std::uint32_t m = 0;
  for (const auto& p : v) {
    std::uint32_t pm = infinity_norm(p);
    if (pm > m) m = pm;
  }
  return m;
}

RingElement uniform_element(RandomSource& rng, std::size_t n) {
  RingElement r(n);
  for (auto& c : r.coeffs) c = static_cast<std::uint32_t>(rng.below(kQ));
  return r;
}

PolyMat to_ntt(const PolyMat& a) {
  PolyMat out = a;
  for (auto& row : out)
    for (auto& p : row) ntt(p);
  return out;
}

PolyVec to_ntt(const PolyVec& v) {
  PolyVec out = v;
  for (auto& p : out) ntt(p);
  return out;
}

PolyVec mat_vec_ntt(const PolyMat& a_hat, const PolyVec& v) {
  PolyVec v_hat = to_ntt(v);
  PolyVec out;
  out.reserve(a_hat.size());
  for (const auto& row : a_hat) {
    if (row.size() != v_hat.size()) throw std::invalid_argument("mat_vec_ntt: shape mismatch");
    RingElement acc(kN);
    for (std::size_t j = 0; j < row.size(); ++j) {
      RingElement term = pointwise(row[j], v_hat[j]);
      acc = add(acc, term);
    }
    intt(acc);
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace bzk::sig
