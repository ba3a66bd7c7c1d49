// SPDX-License-Identifier: Apache-2.0
#include "bzk/pipeline.hpp"

#include <cmath>
#include <utility>

namespace bzk::pipeline {

PipelineConfig desk_config() {
  PipelineConfig cfg;
  cfg.model = bell::BehaviorModel::paper();
  cfg.table = qpe::PefTable::paper();
  cfg.params = qpe::determine_params(512, 0x1p-8, 0x1p-16, 0x1p-8, cfg.table, 4'000'000);
  return cfg;
}

PipelineConfig paper_config() {
  PipelineConfig cfg;
  cfg.model = bell::BehaviorModel::paper();
  cfg.table = qpe::PefTable::paper();
  cfg.params = qpe::determine_params(512, 0x1p-64, 0x1p-100, 0x1p-64, cfg.table, 9'640'000);
  return cfg;
}

EntropyPipeline::EntropyPipeline(PipelineConfig cfg, std::uint64_t sim_seed,
                                 std::uint64_t seed_seed)
    : cfg_(std::move(cfg)),
      sim_rng_(sim_seed),
      seed_rng_(seed_seed),
      src_(cfg_.model, sim_rng_) {}

RunResult EntropyPipeline::run() {
  qpe::QefLedger ledger(cfg_.params, cfg_.mode);
  std::vector<bell::Trial> trials;
  trials.reserve(1 << 20);
  bell::ChshStats stats;

  while (ledger.status() == qpe::LedgerStatus::running) {
    bell::Trial t = src_.next();
    ledger.update(t, cfg_.table);
    stats = bell::update_stats(stats, t);
    trials.push_back(t);
  }

  RunResult res;
  res.trials = ledger.trials();
  res.s_bar = stats.s_bar;
  last_s_ = stats.s_bar;
  if (ledger.status() != qpe::LedgerStatus::success) return res;

  BitVec raw = ext::pack_raw(trials);
  ext::ExtractorConfig ec{raw.size(), cfg_.out_bits,
                          static_cast<std::uint64_t>(std::floor(cfg_.params.k))};
  ec.validate();
  ext::ToeplitzSeed seed;
  seed.bits = BitVec::from_bytes(seed_rng_.get((ec.seed_len() + 7) / 8), ec.seed_len());
  res.block = ext::extract_packed(raw, seed, ec).to_bytes();
  res.success = true;
  return res;
}

std::optional<bytes> EntropyPipeline::next_block() {
  RunResult r = run();
  if (!r.success) return std::nullopt;
  return std::move(r.block);
}

}  // namespace bzk::pipeline
