// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "bzk/bell_sim.hpp"

namespace bzk::qpe {

enum class RescaleMode { per_run, per_trial };

// Per-trial estimation factors F'(a,b,x,y), a QEF once rescaled.
// Index layout matches BehaviorModel: [2x+y][2a+b].
struct PefTable {
  std::array<std::array<double, 4>, 4> f{};
  double alpha = 1.0;
  double rescale = 1.0;

  std::array<std::array<double, 4>, 4> log2f{};  // filled by validate()

  void validate();
  static PefTable from_file(const std::string& path);
  static PefTable paper();
};

struct QpeParams {
  double k_exp;   // target extracted bits
  double eps_h;   // generation smoothing error
  double eps_x;   // extraction error
  double kappa;   // success-probability lower bound
  double alpha;
  double k;       // required smooth min-entropy bits
  double h_s;     // success threshold bits
  std::uint64_t n_max;  // largest allowed trial count

  double threshold_bits() const { return h_s * (alpha - 1.0); }
};

QpeParams determine_params(double k_exp, double eps_h, double eps_x, double kappa,
                           const PefTable& table, std::uint64_t n_max);

// Certified smooth-min-entropy bits on success; equals k by construction.
double min_entropy_bound(const QpeParams& params);

enum class LedgerStatus { running, success, exhausted };

// Running log2-QEF accumulator with Kahan compensation.
class QefLedger {
 public:
  QefLedger(const QpeParams& params, RescaleMode mode = RescaleMode::per_run);

  void update(const bell::Trial& t, const PefTable& table);
  void update_batch(const std::vector<bell::Trial>& trials, const PefTable& table);

  LedgerStatus status() const { return status_; }
  double acc() const { return acc_; }
  std::uint64_t trials() const { return trials_; }
  double threshold_bits() const { return threshold_; }
  RescaleMode mode() const { return mode_; }

  // accumulator with the per-run rescale penalty applied (equal to acc() in
  // per-trial mode, where the penalty is already inside each increment)
  double effective_acc() const;

  std::string checkpoint() const;
  static QefLedger restore(const std::string& serialized);

 private:
  QefLedger() = default;

  double acc_ = 0.0;
  double kahan_c_ = 0.0;
  std::uint64_t trials_ = 0;
  double threshold_ = 0.0;
  std::uint64_t n_max_ = 0;
  double log2_rescale_ = 0.0;
  RescaleMode mode_ = RescaleMode::per_run;
  LedgerStatus status_ = LedgerStatus::running;
};

// threshold_bits / E_nu[per-trial increment]; throws on nonpositive drift.
double expected_stopping(const bell::BehaviorModel& model, const PefTable& table,
                         const QpeParams& params, RescaleMode mode = RescaleMode::per_run);

}  // namespace bzk::qpe
