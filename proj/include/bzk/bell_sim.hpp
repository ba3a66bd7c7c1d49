// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bzk/random.hpp"

namespace bzk::bell {

struct Trial {
  std::uint8_t x, y, a, b;
  std::uint64_t index;  // 1-based
};

// Conditional behavior nu(a,b|x,y) plus the input-setting distribution.
// Row index xy = 2x+y, column index ab = 2a+b.
struct BehaviorModel {
  std::array<std::array<double, 4>, 4> nu{};
  std::array<double, 4> input_dist{0.25, 0.25, 0.25, 0.25};

  void validate() const;  // rows sum to 1 within 1e-12, entries in [0,1]

  // Plain-text table: lines "x y a b probability"; '#' comments allowed.
  static BehaviorModel from_file(const std::string& path);
  static BehaviorModel paper();  // the published empirical table
};

// Sequential trial producer. Sampling walks the cumulative sums with
// half-open intervals [c_{i-1}, c_i), so u < c_i selects outcome i.
class TrialSource {
 public:
  TrialSource(const BehaviorModel& model, RandomSource& rng);

  Trial next();
  std::uint64_t produced() const { return index_; }

 private:
  std::array<double, 4> input_cdf_;
  std::array<std::array<double, 4>, 4> nu_cdf_;
  RandomSource& rng_;
  std::uint64_t index_ = 0;
};

struct ChshStats {
  std::uint64_t wins = 0;
  std::uint64_t total = 0;
  double s_bar = 0.0;  // 8*(wins/total) - 4
};

double chsh_value(double win_prob);
bool is_win(const Trial& t);
ChshStats update_stats(ChshStats stats, const Trial& t);

// Expected CHSH value of a model by direct 16-cell summation.
double expected_chsh(const BehaviorModel& m);

// 4-bit-packed trial records (x | y<<1 | a<<2 | b<<3), two per byte, low
// nibble first.
bytes pack_trials(const std::vector<Trial>& trials);
std::vector<Trial> unpack_trials(const bytes& data, std::uint64_t count);

struct SpacetimeConfig {
  double sa_m, sb_m;       // source-to-station free-space distances
  double l_sa_m, l_sb_m;   // effective optical path lengths
  double t_e_ns;
  double t_qrng1_ns, t_qrng2_ns;
  double t_delay1_ns, t_delay2_ns;
  double t_pc1_ns, t_pc2_ns;
  double t_m1_ns, t_m2_ns;
  double c_mps = 299792458.0;

  void validate() const;
  static SpacetimeConfig paper();
};

struct InequalityResult {
  std::string name;
  double lhs_ns, rhs_ns, slack_ns;
  bool pass;
};

// Two locality inequalities and two measurement-independence inequalities.
std::vector<InequalityResult> check_spacetime(const SpacetimeConfig& cfg);

}  // namespace bzk::bell
