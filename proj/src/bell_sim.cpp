// SPDX-License-Identifier: Apache-2.0
#include "bzk/bell_sim.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bzk::bell {

void BehaviorModel::validate() const {
  double in_sum = 0;
  for (double p : input_dist) {
    if (p < 0 || p > 1) throw std::invalid_argument("BehaviorModel: input prob out of range");
    in_sum += p;
  }
  if (std::fabs(in_sum - 1.0) > 1e-12)
    throw std::invalid_argument("BehaviorModel: input distribution does not sum to 1");
  for (const auto& row : nu) {
    double s = 0;
    for (double p : row) {
      if (p < 0 || p > 1) throw std::invalid_argument("BehaviorModel: probability out of range");
      s += p;
    }
    if (std::fabs(s - 1.0) > 1e-12)
      throw std::invalid_argument("BehaviorModel: conditional row does not sum to 1");
  }
}

BehaviorModel BehaviorModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open behavior model: " + path);
  BehaviorModel m;
  std::array<std::array<bool, 4>, 4> seen{};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int x, y, a, b;
    double p;
    if (!(ls >> x >> y >> a >> b >> p)) continue;
    if (x < 0 || x > 1 || y < 0 || y > 1 || a < 0 || a > 1 || b < 0 || b > 1)
      throw std::runtime_error("behavior model: bad bit value in " + path);
    m.nu[2 * x + y][2 * a + b] = p;
    seen[2 * x + y][2 * a + b] = true;
  }
  for (const auto& row : seen)
    for (bool s : row)
      if (!s) throw std::runtime_error("behavior model: missing cells in " + path);
  m.validate();
  return m;
}

BehaviorModel BehaviorModel::paper() {
  BehaviorModel m;
  m.nu = {{{0.95682221443247694737, 0.00936602447175378418, 0.00818383944336322118,
            0.02562792165240606462},
           {0.93194313970148556781, 0.03424509920274514813, 0.00907494837494691835,
            0.02473681272082236746},
           {0.93038528791661345707, 0.00907576916500537831, 0.03462076595922665423,
            0.02591817695915446876},
           {0.88615498464810593671, 0.05330607243351297847, 0.05486310342832659281,
            0.00567583949005453364}}};
  return m;
}

TrialSource::TrialSource(const BehaviorModel& model, RandomSource& rng) : rng_(rng) {
  model.validate();
  double acc = 0;
  for (int i = 0; i < 4; ++i) {
    acc += model.input_dist[i];
    input_cdf_[i] = acc;
  }
  input_cdf_[3] = 1.0;
  for (int xy = 0; xy < 4; ++xy) {
    acc = 0;
    for (int ab = 0; ab < 4; ++ab) {
      acc += model.nu[xy][ab];
      nu_cdf_[xy][ab] = acc;
    }
    nu_cdf_[xy][3] = 1.0;
  }
}

Trial TrialSource::next() {
  double u = rng_.unit_double();
  int xy = 0;
  while (u >= input_cdf_[xy]) ++xy;
  double v = rng_.unit_double();
  int ab = 0;
  while (v >= nu_cdf_[xy][ab]) ++ab;
  ++index_;
  return Trial{static_cast<std::uint8_t>(xy >> 1), static_cast<std::uint8_t>(xy & 1),
               static_cast<std::uint8_t>(ab >> 1), static_cast<std::uint8_t>(ab & 1), index_};
}

double chsh_value(double win_prob) {
  if (win_prob < 0 || win_prob > 1) throw std::invalid_argument("chsh_value: bad probability");
  return 8.0 * win_prob - 4.0;
}

bool is_win(const Trial& t) { return (t.a ^ t.b) == (t.x & t.y); }

ChshStats update_stats(ChshStats stats, const Trial& t) {
  stats.wins += is_win(t) ? 1 : 0;
  stats.total += 1;
  stats.s_bar = 8.0 * (static_cast<double>(stats.wins) / static_cast<double>(stats.total)) - 4.0;
  return stats;
}

double expected_chsh(const BehaviorModel& m) {
  double omega = 0;
  for (int xy = 0; xy < 4; ++xy) {
    int x = xy >> 1, y = xy & 1;
    for (int ab = 0; ab < 4; ++ab) {
      int a = ab >> 1, b = ab & 1;
      if ((a ^ b) == (x & y)) omega += m.input_dist[xy] * m.nu[xy][ab];
    }
  }
  return chsh_value(omega);
}

bytes pack_trials(const std::vector<Trial>& trials) {
  bytes out((trials.size() + 1) / 2, 0);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const Trial& t = trials[i];
    std::uint8_t nib = static_cast<std::uint8_t>(t.x | (t.y << 1) | (t.a << 2) | (t.b << 3));
    out[i / 2] |= static_cast<std::uint8_t>(nib << (4 * (i % 2)));
  }
  return out;
}

std::vector<Trial> unpack_trials(const bytes& data, std::uint64_t count) {
  if (data.size() * 2 < count) throw std::invalid_argument("unpack_trials: not enough bytes");
  std::vector<Trial> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint8_t nib = (data[i / 2] >> (4 * (i % 2))) & 0xF;
    out.push_back(Trial{static_cast<std::uint8_t>(nib & 1), static_cast<std::uint8_t>((nib >> 1) & 1),
                        static_cast<std::uint8_t>((nib >> 2) & 1),
                        static_cast<std::uint8_t>((nib >> 3) & 1), i + 1});
  }
  return out;
}

void SpacetimeConfig::validate() const {
  for (double v : {sa_m, sb_m, l_sa_m, l_sb_m, t_e_ns, t_qrng1_ns, t_qrng2_ns, t_delay1_ns,
                   t_delay2_ns, t_pc1_ns, t_pc2_ns, t_m1_ns, t_m2_ns})
    if (v < 0) throw std::invalid_argument("SpacetimeConfig: negative value");
  if (c_mps <= 0) throw std::invalid_argument("SpacetimeConfig: bad speed of light");
}

SpacetimeConfig SpacetimeConfig::paper() {
  SpacetimeConfig cfg{};
  cfg.sa_m = 93.0;
  cfg.sb_m = 90.0;
  cfg.l_sa_m = 191.0;
  cfg.l_sb_m = 170.0;
  cfg.t_e_ns = 10.0;
  cfg.t_qrng1_ns = 96.0;
  cfg.t_qrng2_ns = 96.0;
  cfg.t_delay1_ns = 270.0;
  cfg.t_delay2_ns = 230.0;
  cfg.t_pc1_ns = 112.0;
  cfg.t_pc2_ns = 100.0;
  cfg.t_m1_ns = 55.0;
  cfg.t_m2_ns = 100.0;
  return cfg;
}

std::vector<InequalityResult> check_spacetime(const SpacetimeConfig& cfg) {
  cfg.validate();
  const double ns_per_m = 1e9 / cfg.c_mps;
  const double sum_ns = (cfg.sa_m + cfg.sb_m) * ns_per_m;
  const double path_diff_ns = (cfg.l_sa_m - cfg.l_sb_m) * ns_per_m;

  std::vector<InequalityResult> out;
  auto push = [&](std::string name, double lhs, double rhs) {
    out.push_back(InequalityResult{std::move(name), lhs, rhs, lhs - rhs, lhs > rhs});
  };
  push("locality_1", sum_ns,
       cfg.t_e_ns - path_diff_ns + cfg.t_qrng1_ns + cfg.t_delay1_ns + cfg.t_pc1_ns + cfg.t_m2_ns);
  push("locality_2", sum_ns,
       cfg.t_e_ns + path_diff_ns + cfg.t_qrng2_ns + cfg.t_delay2_ns + cfg.t_pc2_ns + cfg.t_m1_ns);
  push("measurement_independence_1", cfg.sa_m * ns_per_m,
       cfg.l_sa_m * ns_per_m - cfg.t_delay1_ns - cfg.t_pc1_ns);
  push("measurement_independence_2", cfg.sb_m * ns_per_m,
       cfg.l_sb_m * ns_per_m - cfg.t_delay2_ns - cfg.t_pc2_ns);
  return out;
}

}  // namespace bzk::bell
