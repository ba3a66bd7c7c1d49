// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "bzk/bell_sim.hpp"
#include "bzk/bytes.hpp"

namespace bzk::ext {

struct ExtractorConfig {
  std::uint64_t n;  // input bits
  std::uint64_t m;  // output bits
  std::uint64_t k;  // min-entropy guarantee in the input

  std::uint64_t seed_len() const { return n + m - 1; }
  double eps_x() const;  // 2^{-(k-m)/2}
  void validate() const; // m <= k <= n
};

struct ToeplitzSeed {
  BitVec bits;  // length n+m-1: first column (rows downward) then first row
};

// T[i][j] = seed[i + n - 1 - j]; output_i = sum_j T[i][j]*raw_j over GF(2).
// Three independent routes. extract() is the FFT production path.
BitVec extract_naive(const BitVec& raw, const ToeplitzSeed& seed, const ExtractorConfig& cfg);
BitVec extract_packed(const BitVec& raw, const ToeplitzSeed& seed, const ExtractorConfig& cfg);
BitVec extract_fft(const BitVec& raw, const ToeplitzSeed& seed, const ExtractorConfig& cfg);
BitVec extract(const BitVec& raw, const ToeplitzSeed& seed, const ExtractorConfig& cfg);

// Output bits (a, b) per trial in index order.
BitVec pack_raw(const std::vector<bell::Trial>& trials);

// NIST SP 800-22 frequency (monobit) and runs test p-values.
double monobit_p(const BitVec& bits);
double runs_p(const BitVec& bits);

}  // namespace bzk::ext
