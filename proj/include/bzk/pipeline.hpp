// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "bzk/bell_sim.hpp"
#include "bzk/extractor.hpp"
#include "bzk/qpe.hpp"

namespace bzk::pipeline {

struct PipelineConfig {
  bell::BehaviorModel model;
  qpe::PefTable table;
  qpe::QpeParams params;
  qpe::RescaleMode mode = qpe::RescaleMode::per_run;
  std::uint32_t out_bits = 512;
};

// Accounting sized so one generation run lasts about a million trials;
// keeps accelerated beacon periods honest on one core.
PipelineConfig desk_config();
// The published accounting: 2^-64 error budgets, 9.64e6-trial budget.
PipelineConfig paper_config();

struct RunResult {
  bool success = false;
  std::uint64_t trials = 0;
  double s_bar = 0.0;
  bytes block;  // out_bits/8 bytes when success
};

// Trials -> QEF ledger -> Toeplitz extraction, one pulse block per run.
class EntropyPipeline {
 public:
  EntropyPipeline(PipelineConfig cfg, std::uint64_t sim_seed, std::uint64_t seed_seed);

  RunResult run();
  // Beacon adapter: a fresh 64-byte block, or nullopt when the trial budget
  // ran out before the entropy threshold.
  std::optional<bytes> next_block();
  double last_s() const { return last_s_; }

 private:
  PipelineConfig cfg_;
  Mt19937Source sim_rng_;
  Mt19937Source seed_rng_;
  bell::TrialSource src_;
  double last_s_ = 0.0;
};

}  // namespace bzk::pipeline
