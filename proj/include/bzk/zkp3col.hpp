// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bzk/beacon.hpp"
#include "bzk/bytes.hpp"
#include "bzk/commitment.hpp"
#include "bzk/hash.hpp"
#include "bzk/random.hpp"
#include "bzk/timestamp.hpp"

namespace bzk::zkp {

struct Graph {
  std::uint32_t v = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // sorted, u < w

  void validate() const;  // throws invalid_argument on malformed instances
  bytes encode() const;
  static Graph decode(std::span<const std::uint8_t> data);
  Digest64 digest() const;
};

struct Coloring {
  std::vector<std::uint8_t> phi;  // one of {1,2,3} per vertex
};

bool verify_witness(const Graph& g, const Coloring& c);

// Smallest R with ((E-1)/E)^R <= 2^-lambda, exact at the boundary.
std::uint64_t round_count(std::uint64_t edge_count, std::uint32_t lambda);

// Balanced random coloring, then distinct cross-color edges sampled until
// edge_factor*v are collected. Throws when the coloring cannot host that many.
std::pair<Graph, Coloring> gen_instance(std::uint32_t v, std::uint32_t edge_factor,
                                        RandomSource& rng);

// Counter-mode SHA-256 PRG over r, rejection-sampled uniform edge indices.
std::vector<std::uint64_t> sample_edges(std::span<const std::uint8_t> r,
                                        std::uint64_t edge_count, std::uint64_t rounds);

struct RoundTranscript {
  std::vector<commit::Commitment> commitments;  // one per vertex
  std::uint64_t edge_index = 0;
  commit::Decommitment d_j;  // opening for the edge's smaller endpoint
  commit::Decommitment d_k;  // opening for the larger endpoint
};

// Commit phase of one round: fresh permutation of the witness colors, one
// keyed commitment per vertex.
struct PreparedRound {
  std::vector<std::uint8_t> colors;             // permuted, 1..3
  std::vector<commit::Commitment> commitments;  // per vertex
  std::vector<commit::Decommitment> openings;   // per vertex
};
PreparedRound prepare_round(const Coloring& phi, RandomSource& rng);

// Digest the timestamp authority signs: binds instance, parameters, and every
// commitment of every round.
Digest64 commit_digest(const Digest64& graph_digest, std::uint32_t lambda, std::uint64_t rounds,
                       std::span<const RoundTranscript> transcripts);

struct Proof {
  Digest64 graph_digest{};
  std::uint32_t lambda = 0;
  std::uint32_t v = 0;
  std::uint32_t edge_count = 0;
  std::vector<RoundTranscript> rounds;
  tsa::TimestampToken ts_token;
  beacon::Pulse pulse;  // challenge pulse, embedded so verification is offline

  bytes encode() const;
  static std::optional<Proof> decode(std::span<const std::uint8_t> data);
  std::string to_json(bool include_rounds = false) const;
};

// Service access used by the prover; implementations live in services.hpp.
class TsaClient {
 public:
  virtual ~TsaClient() = default;
  virtual tsa::TimestampToken stamp(const Digest64& digest) = 0;
};

class BeaconClient {
 public:
  virtual ~BeaconClient() = default;
  // First pulse whose timestamp is strictly after t_ms, or nullopt after the
  // implementation-defined wait budget.
  virtual std::optional<beacon::Pulse> pulse_after(std::uint64_t t_ms) = 0;
};

struct ProveStats {
  double commit_s = 0;    // round preparation and commitments
  double respond_s = 0;   // stamping, challenge fetch, openings
  std::uint64_t rounds = 0;
  std::size_t proof_bytes = 0;
};

Proof prove(const Graph& g, const Coloring& phi, std::uint32_t lambda, TsaClient& tsa,
            BeaconClient& bc, RandomSource& rng, ProveStats* stats = nullptr);

struct VerifierKeys {
  sig::PublicKey ts;
  sig::PublicKey bc_legacy;
  sig::PublicKey bc_pqc;
};

bool verify(const Graph& g, const Proof& p, const VerifierKeys& keys,
            std::vector<std::string>* findings = nullptr);

// Appendix A reference semantics: one sigma-protocol round with a locally
// generated challenge.
bool interactive_round(const Graph& g, const Coloring& phi, RandomSource& rng);

// Fiat-Shamir variant: challenge seed is the hash of the commitments. Kept
// only to contrast with the beacon-anchored mode; no freshness.
struct FsProof {
  Digest64 graph_digest{};
  std::uint32_t lambda = 0;
  std::vector<RoundTranscript> rounds;
};

// rounds_override: nonzero forces the round count (demo use); checked=false
// skips the witness validity check so cheating provers can be exercised.
FsProof fiat_shamir_prove(const Graph& g, const Coloring& phi, std::uint32_t lambda,
                          RandomSource& rng, std::uint64_t rounds_override = 0,
                          bool checked = true);
bool fiat_shamir_verify(const Graph& g, const FsProof& p, std::uint64_t rounds_override = 0,
                        std::vector<std::string>* findings = nullptr);

// Challenge seed used by the Fiat-Shamir variant.
bytes fs_challenge_seed(const Digest64& cd);

}  // namespace bzk::zkp
