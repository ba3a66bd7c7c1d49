// SPDX-License-Identifier: Apache-2.0
#include "bzk/bench.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace bzk::bench {

std::vector<BenchRow> run_grid(std::span<const std::uint32_t> vertex_counts,
                               std::uint32_t lambda, zkp::TsaClient& tsa,
                               zkp::BeaconClient& bc, const zkp::VerifierKeys& keys,
                               RandomSource& rng) {
  std::vector<BenchRow> rows;
  rows.reserve(vertex_counts.size());
  for (std::uint32_t v : vertex_counts) {
    auto [g, phi] = zkp::gen_instance(v, 3, rng);
    zkp::ProveStats stats;
    zkp::Proof proof = zkp::prove(g, phi, lambda, tsa, bc, rng, &stats);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> findings;
    bool ok = zkp::verify(g, proof, keys, &findings);
    double verify_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!ok)
      throw std::runtime_error("bench: honest proof failed to verify at v=" + std::to_string(v) +
                               (findings.empty() ? "" : (": " + findings.front())));

    rows.push_back({v, stats.rounds, stats.commit_s, stats.respond_s, verify_s,
                    stats.proof_bytes});
  }
  return rows;
}

std::string to_csv(std::span<const BenchRow> rows) {
  std::string out = "v,rounds,commit_s,response_s,verify_s,proof_bytes,proof_mb\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%u,%llu,%.6f,%.6f,%.6f,%zu,%.2f\n", r.v,
                  static_cast<unsigned long long>(r.rounds), r.commit_s, r.response_s,
                  r.verify_s, r.proof_bytes, static_cast<double>(r.proof_bytes) / 1e6);
    out += line;
  }
  return out;
}

}  // namespace bzk::bench
