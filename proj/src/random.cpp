// SPDX-License-Identifier: Apache-2.0
#include "bzk/random.hpp"

#include <openssl/rand.h>

#include <cstring>
#include <stdexcept>

#include "bzk/hash.hpp"

namespace bzk {

std::uint64_t RandomSource::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below: zero bound");
  const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

void OsRandom::fill(std::uint8_t* out, std::size_t n) {
  if (n == 0) return;
  if (RAND_bytes(out, static_cast<int>(n)) != 1)
    throw std::runtime_error("OS entropy source failed");
}

void CounterDrbg::fill(std::uint8_t* out, std::size_t n) {
  while (n > 0) {
    if (avail_ == 0) {
      bytes block = seed_;
      append_be64(block, counter_++);
      Digest64 d = sha512(block);
      std::memcpy(buf_, d.data(), 64);
      avail_ = 64;
    }
    std::size_t take = n < avail_ ? n : avail_;
    std::memcpy(out, buf_ + (64 - avail_), take);
    avail_ -= take;
    out += take;
    n -= take;
  }
}

void Mt19937Source::fill(std::uint8_t* out, std::size_t n) {
  while (n >= 8) {
    std::uint64_t v = eng_();
    std::memcpy(out, &v, 8);
    out += 8;
    n -= 8;
  }
  if (n) {
    std::uint64_t v = eng_();
    std::memcpy(out, &v, n);
  }
}

}  // namespace bzk
