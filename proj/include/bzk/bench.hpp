// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bzk/zkp3col.hpp"

namespace bzk::bench {

struct BenchRow {
  std::uint32_t v = 0;
  std::uint64_t rounds = 0;
  double commit_s = 0;
  double response_s = 0;
  double verify_s = 0;
  std::size_t proof_bytes = 0;
};

// One prove/verify cycle per vertex count at the given lambda; throws if any
// generated proof fails to verify.
std::vector<BenchRow> run_grid(std::span<const std::uint32_t> vertex_counts,
                               std::uint32_t lambda, zkp::TsaClient& tsa,
                               zkp::BeaconClient& bc, const zkp::VerifierKeys& keys,
                               RandomSource& rng);

std::string to_csv(std::span<const BenchRow> rows);

}  // namespace bzk::bench
