// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "bzk/bytes.hpp"

namespace bzk {

// Injected randomness source. Protocol code never reaches for a global RNG;
// callers pick the OS-entropy, deterministic, or simulation-grade source.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual void fill(std::uint8_t* out, std::size_t n) = 0;

  virtual std::uint64_t next_u64() {
    std::uint8_t buf[8];
    fill(buf, 8);
    return load_be64(buf);
  }

  bytes get(std::size_t n) {
    bytes out(n);
    if (n) fill(out.data(), n);
    return out;
  }

  // Uniform in [0, bound) by rejection below the largest multiple of bound.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform double in [0, 1) from the top 53 bits of one draw.
  double unit_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

// OS entropy via libcrypto; failure throws, never degrades.
class OsRandom final : public RandomSource {
 public:
  void fill(std::uint8_t* out, std::size_t n) override;
};

// Deterministic expansion: block_i = SHA-512(seed || be64(i)).
class CounterDrbg final : public RandomSource {
 public:
  explicit CounterDrbg(bytes seed) : seed_(std::move(seed)) {}

  void fill(std::uint8_t* out, std::size_t n) override;

 private:
  bytes seed_;
  std::uint64_t counter_ = 0;
  std::uint8_t buf_[64];
  std::size_t avail_ = 0;
};

// mt19937_64-backed source for simulation sampling (not used for key material).
class Mt19937Source final : public RandomSource {
 public:
  explicit Mt19937Source(std::uint64_t seed) : eng_(seed) {}

  void fill(std::uint8_t* out, std::size_t n) override;
  std::uint64_t next_u64() override { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace bzk
