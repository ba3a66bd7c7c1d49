// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bzk/clock.hpp"
#include "bzk/hash.hpp"
#include "bzk/lattice_sig.hpp"

namespace bzk::beacon {

inline constexpr std::size_t kHashLen = 64;

// The 25-field pulse record. Field numbering follows the wire order used by
// the canonical encoding (see docs/FORMATS.md).
struct Pulse {
  std::string uri;                        // F1
  std::string version;                    // F2
  std::uint64_t cipher_suite = 0;         // F3
  std::uint64_t period_ms = 60000;        // F4
  bytes certificate_id;                   // F5
  std::uint64_t chain_index = 1;          // F6
  std::uint64_t pulse_index = 1;          // F7
  std::string timestamp;                  // F8, RFC-3339 UTC with ms
  bytes local_random_value;               // F9
  bytes external_source_id;               // F10
  std::uint64_t external_status_code = 0; // F11
  bytes external_value;                   // F12
  bytes previous;                         // F13
  bytes hour;                             // F14
  bytes day;                              // F15
  bytes month;                            // F16
  bytes year;                             // F17
  bytes precommitment_value;              // F18
  std::uint64_t status_code = 0;          // F19
  std::string type;                       // F20
  std::string chsh;                       // F21
  std::string method;                     // F22
  bytes signature_rsa;                    // F23 (classical slot)
  bytes signature_pqc;                    // F24
  bytes output_value;                     // F25

  bytes encode_f1_f22() const;
  bytes encode_f1_f24() const;
  bytes encode() const;  // all 25 fields
  static Pulse decode(std::span<const std::uint8_t> data);

  Digest64 signing_digest() const;  // SHA-512 over F1..F22
  Digest64 compute_output() const; // SHA-512 over F1..F24

  std::string to_json() const;
  static Pulse from_json(const std::string& s);
};

// Beacon signing identity: a post-quantum keypair plus an independently
// keyed signature in the classical slot.
struct BeaconKeys {
  sig::SigKeypair legacy;
  sig::SigKeypair pqc;

  bytes certificate_id() const;  // SHA-512(pk_legacy || pk_pqc)
};

// Append-only pulse log backed by a file; index rebuilt on load.
class ChainStore {
 public:
  explicit ChainStore(std::string path);

  void append(const Pulse& p);
  std::size_t size() const { return pulses_.size(); }
  const Pulse& at(std::size_t idx0) const { return pulses_.at(idx0); }
  std::optional<Pulse> by_index(std::uint64_t chain, std::uint64_t pulse_index) const;
  std::optional<Pulse> last() const;
  // first pulse whose timestamp is at or after the given time
  std::optional<Pulse> first_at_or_after(std::uint64_t unix_ms) const;

  // output_value of the first pulse in the given UTC period; prefix is a
  // timestamp prefix of length 13 (hour), 10 (day), 7 (month) or 4 (year)
  std::optional<bytes> first_output_with_prefix(const std::string& prefix) const;

  const std::string& path() const { return path_; }

 private:
  void load();

  std::string path_;
  std::vector<Pulse> pulses_;
};

struct EngineConfig {
  std::string uri_base = "https://beacon.example/beacon/2.0";
  std::string version = "2.0";
  std::uint64_t cipher_suite = 0;
  std::uint64_t period_ms = 60000;
  std::uint64_t chain_index = 1;
  std::string external_source_descriptor = "none";
};

// Builds pulses over a store: tracks the precommitted local random value for
// the next pulse and persists it next to the store so restarts keep the
// precommitment chain intact.
class BeaconEngine {
 public:
  BeaconEngine(EngineConfig cfg, BeaconKeys keys, ChainStore& store,
               std::string state_path);

  // Installs the first pulse's randomness ahead of any emit. Only legal on an
  // empty chain with no loaded pending state.
  void prime(const bytes& fresh_block);
  bool primed() const { return pending_.has_value(); }

  // fresh_block: 64 bytes of newly extracted randomness, or nullopt when the
  // entropy pipeline is exhausted (degraded pulse, nonzero status).
  Pulse emit(std::optional<bytes> fresh_block, std::uint64_t now_ms, const std::string& chsh);

  const BeaconKeys& keys() const { return keys_; }
  const EngineConfig& config() const { return cfg_; }

 private:
  struct Pending {
    bytes lrv;
    bool fresh;
  };

  Pending make_pending(const std::optional<bytes>& block) const;
  void persist_pending() const;
  void load_pending();

  EngineConfig cfg_;
  BeaconKeys keys_;
  ChainStore& store_;
  std::string state_path_;
  std::optional<Pending> pending_;
};

// Findings are human-readable defect descriptions; empty means pass.
std::vector<std::string> verify_pulse(const Pulse& p, const Pulse* prev,
                                      const sig::PublicKey& pk_legacy,
                                      const sig::PublicKey& pk_pqc);

// Full-chain sweep: per-pulse checks, consecutive links, precommitments and
// hour/day/month/year anchors.
std::vector<std::string> audit_chain(const ChainStore& store, const sig::PublicKey& pk_legacy,
                                     const sig::PublicKey& pk_pqc);

}  // namespace bzk::beacon
