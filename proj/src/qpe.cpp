// SPDX-License-Identifier: Apache-2.0
#include "bzk/qpe.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bzk::qpe {

void PefTable::validate() {
  if (alpha <= 1.0) throw std::invalid_argument("PefTable: alpha must exceed 1");
  if (rescale < 1.0) throw std::invalid_argument("PefTable: rescale must be >= 1");
  for (int xy = 0; xy < 4; ++xy)
    for (int ab = 0; ab < 4; ++ab) {
      if (f[xy][ab] <= 0) throw std::invalid_argument("PefTable: nonpositive factor");
      log2f[xy][ab] = std::log2(f[xy][ab]);
    }
}

PefTable PefTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open PEF table: " + path);
  PefTable t;
  std::array<std::array<bool, 4>, 4> seen{};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "alpha") {
      ls >> t.alpha;
    } else if (key == "rescale") {
      ls >> t.rescale;
    } else {
      std::istringstream row(line);
      int x, y, a, b;
      double v;
      if (!(row >> x >> y >> a >> b >> v)) continue;
      t.f[2 * x + y][2 * a + b] = v;
      seen[2 * x + y][2 * a + b] = true;
    }
  }
  for (const auto& row : seen)
    for (bool s : row)
      if (!s) throw std::runtime_error("PEF table: missing cells in " + path);
  t.validate();
  return t;
}

PefTable PefTable::paper() {
  PefTable t;
  t.alpha = 1.0071;
  t.rescale = 1.0 + 2.99e-7;
  t.f = {{{1.00022261334798057142, 0.96652962358942828835, 0.96475845132959570094,
           1.01624555865876731175},
          {1.00030376388124353504, 0.98863956250689444261, 0.95058782881190451164,
           1.02410372452527931308},
          {1.00032392821147841921, 0.94883682088230669738, 0.98897461161237376626,
           1.02266760137092616034},
          {0.99914969455929725228, 1.01081389593364656676, 1.01049901115840201626,
           0.93698311543584200667}}};
  t.validate();
  return t;
}

QpeParams determine_params(double k_exp, double eps_h, double eps_x, double kappa,
                           const PefTable& table, std::uint64_t n_max) {
  if (eps_h <= 0 || eps_h > 1 || eps_x <= 0 || eps_x > 1 || kappa <= 0 || kappa > 1)
    throw std::invalid_argument("determine_params: error parameters must lie in (0,1]");
  if (table.alpha <= 1.0) throw std::invalid_argument("determine_params: alpha must exceed 1");
  QpeParams p{};
  p.k_exp = k_exp;
  p.eps_h = eps_h;
  p.eps_x = eps_x;
  p.kappa = kappa;
  p.alpha = table.alpha;
  p.k = k_exp - 2.0 * std::log2(eps_x);
  if (p.k <= 0) throw std::invalid_argument("determine_params: derived k is nonpositive");
  const double am1 = table.alpha - 1.0;
  p.h_s = p.k + std::log2(2.0 / (eps_h * eps_h)) / am1 +
          (table.alpha / am1) * std::log2(1.0 / kappa);
  p.n_max = n_max;
  return p;
}

double min_entropy_bound(const QpeParams& params) {
  const double am1 = params.alpha - 1.0;
  return params.h_s - std::log2(2.0 / (params.eps_h * params.eps_h)) / am1 +
         (params.alpha / am1) * std::log2(params.kappa);
}

QefLedger::QefLedger(const QpeParams& params, RescaleMode mode)
    : threshold_(params.threshold_bits()), n_max_(params.n_max), mode_(mode) {
  if (n_max_ == 0) throw std::invalid_argument("QefLedger: n_max must be positive");
}

double QefLedger::effective_acc() const {
  return mode_ == RescaleMode::per_run ? acc_ - log2_rescale_ : acc_;
}

void QefLedger::update(const bell::Trial& t, const PefTable& table) {
  if (status_ != LedgerStatus::running)
    throw std::logic_error("QefLedger: update after terminal status");
  if (mode_ == RescaleMode::per_run)
    log2_rescale_ = std::log2(table.rescale);

  double inc = table.log2f[2 * t.x + t.y][2 * t.a + t.b];
  if (mode_ == RescaleMode::per_trial) inc -= std::log2(table.rescale);

  double y = inc - kahan_c_;
  double s = acc_ + y;
  kahan_c_ = (s - acc_) - y;
  acc_ = s;
  ++trials_;

  if (effective_acc() >= threshold_)
    status_ = LedgerStatus::success;
  else if (trials_ >= n_max_)
    status_ = LedgerStatus::exhausted;
}

void QefLedger::update_batch(const std::vector<bell::Trial>& trials, const PefTable& table) {
  for (const auto& t : trials) {
    update(t, table);
    if (status_ != LedgerStatus::running) break;
  }
}

std::string QefLedger::checkpoint() const {
  nlohmann::json j;
  j["acc"] = acc_;
  j["kahan_c"] = kahan_c_;
  j["trials"] = trials_;
  j["threshold"] = threshold_;
  j["n_max"] = n_max_;
  j["log2_rescale"] = log2_rescale_;
  j["mode"] = mode_ == RescaleMode::per_run ? "per_run" : "per_trial";
  j["status"] = status_ == LedgerStatus::running
                    ? "running"
                    : (status_ == LedgerStatus::success ? "success" : "exhausted");
  return j.dump();
}

QefLedger QefLedger::restore(const std::string& serialized) {
  nlohmann::json j = nlohmann::json::parse(serialized);
  QefLedger l;
  l.acc_ = j.at("acc").get<double>();
  l.kahan_c_ = j.at("kahan_c").get<double>();
  l.trials_ = j.at("trials").get<std::uint64_t>();
  l.threshold_ = j.at("threshold").get<double>();
  l.n_max_ = j.at("n_max").get<std::uint64_t>();
  l.log2_rescale_ = j.at("log2_rescale").get<double>();
  l.mode_ = j.at("mode").get<std::string>() == "per_trial" ? RescaleMode::per_trial
                                                           : RescaleMode::per_run;
  std::string st = j.at("status").get<std::string>();
  l.status_ = st == "running" ? LedgerStatus::running
                              : (st == "success" ? LedgerStatus::success : LedgerStatus::exhausted);
  return l;
}

double expected_stopping(const bell::BehaviorModel& model, const PefTable& table,
                         const QpeParams& params, RescaleMode mode) {
  double mean_log2f = 0;
  for (int xy = 0; xy < 4; ++xy)
    for (int ab = 0; ab < 4; ++ab)
      mean_log2f += model.input_dist[xy] * model.nu[xy][ab] * table.log2f[xy][ab];

  const double log2_rescale = std::log2(table.rescale);
  double drift, target;
  if (mode == RescaleMode::per_trial) {
    drift = mean_log2f - log2_rescale;
    target = params.threshold_bits();
  } else {
    drift = mean_log2f;
    target = params.threshold_bits() + log2_rescale;
  }
  if (drift <= 0)
    throw std::invalid_argument("expected_stopping: nonpositive drift, protocol cannot terminate");
  return target / drift;
}

}  // namespace bzk::qpe
