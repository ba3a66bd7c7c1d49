// SPDX-License-Identifier: Apache-2.0
//
// Entropy accounting: parameter derivation against pinned values, the QEF
// ledger state machine, and the stopping-time expectation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>

#include "bzk/qpe.hpp"

using namespace bzk;
using namespace bzk::qpe;

namespace {

// paper accounting chain, reused across cases
QpeParams paper_params() {
  return determine_params(512, 0x1.0p-64, 0x1.0p-100, 0x1.0p-64, PefTable::paper(), 9640000);
}

QpeParams toy_params(double h_s, double alpha, std::uint64_t n_max) {
  QpeParams p{};
  p.alpha = alpha;
  p.h_s = h_s;
  p.n_max = n_max;
  return p;
}

}  // namespace

TEST_CASE("published estimation factors validate and expose log2 values") {
  PefTable t = PefTable::paper();
  CHECK(t.alpha == 1.0071);
  CHECK(t.rescale == doctest::Approx(1.0 + 2.99e-7).epsilon(1e-15));
  for (int xy = 0; xy < 4; ++xy)
    for (int ab = 0; ab < 4; ++ab)
      CHECK(t.log2f[xy][ab] == doctest::Approx(std::log2(t.f[xy][ab])).epsilon(1e-15));
}

TEST_CASE("factor table file loader matches the embedded table") {
  PefTable file = PefTable::from_file(std::string(BZK_TEST_DATA_DIR) + "/pef_table.txt");
  PefTable ref = PefTable::paper();
  CHECK(file.alpha == ref.alpha);
  CHECK(file.rescale == doctest::Approx(ref.rescale).epsilon(1e-15));
  for (int xy = 0; xy < 4; ++xy)
    for (int ab = 0; ab < 4; ++ab) CHECK(file.f[xy][ab] == ref.f[xy][ab]);
}

TEST_CASE("factor table loader rejects incomplete files") {
  std::string missing = "/tmp/bzk_pef_missing.txt";
  {
    std::ofstream out(missing);
    out << "alpha 1.01\nrescale 1.0\n0 0 0 0 1.0\n";
  }
  CHECK_THROWS(PefTable::from_file(missing));
  CHECK_THROWS(PefTable::from_file("/tmp/bzk_pef_does_not_exist.txt"));
  std::remove(missing.c_str());
}

TEST_CASE("table validation rejects unusable parameters") {
  PefTable t = PefTable::paper();
  t.alpha = 1.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = PefTable::paper();
  t.rescale = 0.5;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = PefTable::paper();
  t.f[2][3] = 0.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("parameter chain reproduces the published accounting") {
  QpeParams p = paper_params();
  // k = k_exp + 2*100 exactly by IEEE arithmetic on powers of two
  CHECK(p.k == 712.0);
  // frozen from an out-of-band evaluation of the h_s formula
  CHECK(p.h_s == doctest::Approx(27959.098591548885).epsilon(1e-12));
  // within 3% of the published 2.84e4 bits
  CHECK(std::abs(p.h_s - 28400.0) / 28400.0 < 0.03);
  CHECK(p.threshold_bits() == doctest::Approx(198.5096).epsilon(1e-6));
  CHECK(min_entropy_bound(p) == doctest::Approx(p.k).epsilon(1e-12));
}

TEST_CASE("parameter derivation rejects out-of-range inputs") {
  PefTable t = PefTable::paper();
  CHECK_THROWS_AS(determine_params(512, 0.0, 0.5, 0.5, t, 100), std::invalid_argument);
  CHECK_THROWS_AS(determine_params(512, 0.5, 2.0, 0.5, t, 100), std::invalid_argument);
  CHECK_THROWS_AS(determine_params(-800, 0.5, 0.5, 0.5, t, 100), std::invalid_argument);
}

TEST_CASE("per-trial increments match the pinned oracle value") {
  PefTable t = PefTable::paper();
  QpeParams p = paper_params();
  bell::Trial trial{0, 0, 0, 0, 1};

  QefLedger per_trial(p, RescaleMode::per_trial);
  per_trial.update(trial, t);
  CHECK(per_trial.acc() == doctest::Approx(3.206960651141532e-4).epsilon(1e-12));
  CHECK(per_trial.effective_acc() == per_trial.acc());

  QefLedger per_run(p, RescaleMode::per_run);
  per_run.update(trial, t);
  CHECK(per_run.acc() == doctest::Approx(t.log2f[0][0]).epsilon(1e-15));
  CHECK(per_run.effective_acc() ==
        doctest::Approx(per_run.acc() - std::log2(t.rescale)).epsilon(1e-12));
}

TEST_CASE("mean increment under the published behavior matches the pinned oracle") {
  bell::BehaviorModel m = bell::BehaviorModel::paper();
  PefTable t = PefTable::paper();
  double mean = 0;
  for (int xy = 0; xy < 4; ++xy)
    for (int ab = 0; ab < 4; ++ab)
      mean += m.input_dist[xy] * m.nu[xy][ab] * std::log2(t.f[xy][ab]);
  CHECK(mean == doctest::Approx(2.8669003409526506e-05).epsilon(1e-9));
}

TEST_CASE("expected stopping counts match the pinned oracle") {
  bell::BehaviorModel m = bell::BehaviorModel::paper();
  PefTable t = PefTable::paper();
  QpeParams p = paper_params();
  CHECK(expected_stopping(m, t, p, RescaleMode::per_run) ==
        doctest::Approx(6924189.0830918296).epsilon(1e-9));
  CHECK(expected_stopping(m, t, p, RescaleMode::per_trial) ==
        doctest::Approx(7029964.8438284811).epsilon(1e-9));
}

TEST_CASE("expected stopping rejects nonpositive drift") {
  bell::BehaviorModel m = bell::BehaviorModel::paper();
  PefTable t = PefTable::paper();
  for (auto& row : t.f)
    for (auto& v : row) v = 0.99;  // log2 negative everywhere
  t.validate();
  CHECK_THROWS_AS(expected_stopping(m, t, paper_params()), std::invalid_argument);
}

TEST_CASE("ledger reaches success exactly at the threshold") {
  PefTable t;
  t.alpha = 2.0;
  t.rescale = 1.0;
  for (auto& row : t.f)
    for (auto& v : row) v = 2.0;  // every increment is exactly one bit
  t.validate();

  QefLedger led(toy_params(5.0, 2.0, 100), RescaleMode::per_run);
  bell::Trial trial{0, 1, 1, 0, 1};
  for (int i = 0; i < 4; ++i) {
    led.update(trial, t);
    CHECK(led.status() == LedgerStatus::running);
  }
  led.update(trial, t);
  CHECK(led.status() == LedgerStatus::success);
  CHECK(led.trials() == 5);
  CHECK(led.acc() == doctest::Approx(5.0));
  CHECK_THROWS_AS(led.update(trial, t), std::logic_error);
}

TEST_CASE("ledger exhausts at the trial budget") {
  PefTable t;
  t.alpha = 2.0;
  t.rescale = 1.0;
  for (auto& row : t.f)
    for (auto& v : row) v = 2.0;
  t.validate();

  QefLedger led(toy_params(1000.0, 2.0, 3), RescaleMode::per_run);
  bell::Trial trial{0, 0, 1, 1, 1};
  led.update(trial, t);
  led.update(trial, t);
  CHECK(led.status() == LedgerStatus::running);
  led.update(trial, t);
  CHECK(led.status() == LedgerStatus::exhausted);
  CHECK(led.trials() == 3);
}

TEST_CASE("batch updates stop at the terminal state") {
  PefTable t;
  t.alpha = 2.0;
  t.rescale = 1.0;
  for (auto& row : t.f)
    for (auto& v : row) v = 2.0;
  t.validate();

  QefLedger led(toy_params(2.0, 2.0, 100), RescaleMode::per_run);
  std::vector<bell::Trial> batch(10, bell::Trial{0, 0, 0, 0, 1});
  led.update_batch(batch, t);
  CHECK(led.status() == LedgerStatus::success);
  CHECK(led.trials() == 2);  // not 10: the fold halts on success
}

TEST_CASE("checkpoint and restore preserve the accumulator exactly") {
  bell::BehaviorModel m = bell::BehaviorModel::paper();
  PefTable t = PefTable::paper();
  QpeParams p = paper_params();

  Mt19937Source rng(77);
  bell::TrialSource src(m, rng);

  QefLedger full(p, RescaleMode::per_run);
  QefLedger half(p, RescaleMode::per_run);
  for (int i = 0; i < 2000; ++i) {
    bell::Trial trial = src.next();
    full.update(trial, t);
    half.update(trial, t);
    if (i == 999) {
      QefLedger restored = QefLedger::restore(half.checkpoint());
      CHECK(restored.acc() == half.acc());
      CHECK(restored.trials() == half.trials());
      CHECK(restored.status() == half.status());
      CHECK(restored.mode() == half.mode());
      half = restored;
    }
  }
  CHECK(half.acc() == full.acc());
  CHECK(half.trials() == full.trials());
  CHECK(half.effective_acc() == full.effective_acc());
}
