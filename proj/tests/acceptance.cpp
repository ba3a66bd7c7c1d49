// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate. One check per published claim, one [PASS]/[FAIL] line per
// criterion with the measured values and the pinned tolerance.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "bzk/beacon.hpp"
#include "bzk/bell_sim.hpp"
#include "bzk/clock.hpp"
#include "bzk/commitment.hpp"
#include "bzk/extractor.hpp"
#include "bzk/lattice_sig.hpp"
#include "bzk/pipeline.hpp"
#include "bzk/qpe.hpp"
#include "bzk/random.hpp"
#include "bzk/services.hpp"
#include "bzk/timestamp.hpp"
#include "bzk/zkp3col.hpp"

using namespace bzk;

namespace {

int g_failed = 0;

std::string fmt(const char* f, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void report(int num, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", num, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

class Timer {
 public:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

BitVec random_bits(std::uint64_t n, RandomSource& rng) {
  return BitVec::from_bytes(rng.get((n + 7) / 8), n);
}

bool bits_equal(const BitVec& a, const BitVec& b) {
  return a.size() == b.size() && a.words() == b.words();
}

// 1. Round-count table rows, +-1, under one second.
void c1() {
  Timer t;
  const std::uint64_t v_list[5] = {50, 100, 150, 200, 250};
  const std::uint64_t table[5] = {6632, 13286, 19940, 26595, 33249};
  std::uint64_t got[5];
  bool ok = true;
  for (int i = 0; i < 5; ++i) {
    got[i] = zkp::round_count(3 * v_list[i], 64);
    ok = ok && got[i] + 1 >= table[i] && got[i] <= table[i] + 1;
  }
  double el = t.elapsed();
  ok = ok && el < 1.0;
  report(1, ok,
         fmt("round_count(3V,64) = {%llu,%llu,%llu,%llu,%llu} vs table "
             "{6632,13286,19940,26595,33249}, tolerance +-1, %.3f s (limit 1 s)",
             (unsigned long long)got[0], (unsigned long long)got[1], (unsigned long long)got[2],
             (unsigned long long)got[3], (unsigned long long)got[4], el));
}

// 2. Parameter chain and the Toeplitz error identity.
void c2() {
  Timer t;
  auto table = qpe::PefTable::paper();
  auto p = qpe::determine_params(512.0, 0x1p-64, 0x1p-100, 0x1p-64, table, 9'640'000);
  bool k_ok = p.k == 712.0;
  double h_rel = std::abs(p.h_s - 2.84e4) / 2.84e4;
  ext::ExtractorConfig ec{1'000'000, 512, 712};
  ec.validate();
  bool eps_ok = ec.eps_x() == 0x1p-100;
  double el = t.elapsed();
  bool ok = k_ok && h_rel <= 0.03 && eps_ok && el < 1.0;
  report(2, ok,
         fmt("k = %.1f (want 712 exact), h_s = %.1f vs 2.84e4 (rel %.4f, limit 0.03), "
             "eps_x = 2^-(712-512)/2 %s, %.3f s (limit 1 s)",
             p.k, p.h_s, h_rel, eps_ok ? "holds exactly" : "broken", el));
}

// 3. Simulated CHSH against the table expectation.
void c3() {
  Timer t;
  auto model = bell::BehaviorModel::paper();
  Mt19937Source rng(20260815);
  bell::TrialSource src(model, rng);
  bell::ChshStats st;
  const std::uint64_t n = 1'000'000;
  for (std::uint64_t i = 0; i < n; ++i) st = bell::update_stats(st, src.next());

  double expect = bell::expected_chsh(model);
  double w = static_cast<double>(st.wins) / static_cast<double>(st.total);
  double sigma3 = 3.0 * 8.0 * std::sqrt(w * (1.0 - w) / static_cast<double>(n));
  double el = t.elapsed();
  bool ok = st.s_bar >= 1.99 && st.s_bar <= 2.03 && std::abs(st.s_bar - expect) <= sigma3 &&
            el < 30.0;
  report(3, ok,
         fmt("S_bar = %.6f over 1e6 trials (band [1.99,2.03]), table expectation %.6f, "
             "deviation %.6f vs 3 sigma %.6f, %.2f s (limit 30 s)",
             st.s_bar, expect, std::abs(st.s_bar - expect), sigma3, el));
}

// 4. Stopping behavior of 200 generation runs at the published accounting.
void c4() {
  Timer t;
  auto cfg = pipeline::paper_config();
  Mt19937Source rng(424242);
  bell::TrialSource src(cfg.model, rng);
  const int runs = 200;
  int successes = 0;
  double total_trials = 0.0;
  for (int r = 0; r < runs; ++r) {
    qpe::QefLedger led(cfg.params, qpe::RescaleMode::per_run);
    while (led.status() == qpe::LedgerStatus::running) led.update(src.next(), cfg.table);
    if (led.status() == qpe::LedgerStatus::success) ++successes;
    total_trials += static_cast<double>(led.trials());
  }
  double mean = total_trials / runs;
  double expect =
      qpe::expected_stopping(cfg.model, cfg.table, cfg.params, qpe::RescaleMode::per_run);
  double rel = std::abs(mean - expect) / expect;
  double el = t.elapsed();
  bool ok = successes >= 198 && rel <= 0.10 && el < 600.0;
  report(4, ok,
         fmt("%d/200 runs reached threshold before 9.64e6 trials (need >= 198), mean stop "
             "%.0f vs expected %.0f (rel %.4f, limit 0.10), %.1f s (limit 600 s)",
             successes, mean, expect, rel, el));
}

// 5. Extractor: route agreement, paper-scale runtime, output statistics.
void c5() {
  Mt19937Source rng(31);

  bool agree = true;
  for (std::uint64_t n = 4; n <= 8 && agree; ++n) {
    ext::ExtractorConfig ec{n, 3, n};
    ec.validate();
    for (int s = 0; s < 4 && agree; ++s) {
      ext::ToeplitzSeed seed{random_bits(ec.seed_len(), rng)};
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << n) && agree; ++x) {
        BitVec raw(n);
        for (std::uint64_t j = 0; j < n; ++j) raw.set(j, (x >> j) & 1);
        BitVec ref = ext::extract_naive(raw, seed, ec);
        agree = bits_equal(ref, ext::extract_fft(raw, seed, ec)) &&
                bits_equal(ref, ext::extract_packed(raw, seed, ec));
      }
    }
  }
  int random_small = 0;
  for (int i = 0; i < 1000 && agree; ++i) {
    std::uint64_t n = 4 + rng.below(61);
    std::uint64_t m = 1 + rng.below(n);
    ext::ExtractorConfig ec{n, m, n};
    ec.validate();
    BitVec raw = random_bits(n, rng);
    ext::ToeplitzSeed seed{random_bits(ec.seed_len(), rng)};
    BitVec ref = ext::extract_naive(raw, seed, ec);
    agree = bits_equal(ref, ext::extract_fft(raw, seed, ec)) &&
            bits_equal(ref, ext::extract_packed(raw, seed, ec));
    if (agree) ++random_small;
  }

  ext::ExtractorConfig big{13'000'000, 512, 712};
  big.validate();
  BitVec big_raw = random_bits(big.n, rng);
  ext::ToeplitzSeed big_seed{random_bits(big.seed_len(), rng)};
  Timer big_t;
  BitVec big_fft = ext::extract_fft(big_raw, big_seed, big);
  double fft_s = big_t.elapsed();
  bool big_match = bits_equal(big_fft, ext::extract_packed(big_raw, big_seed, big));

  auto model = bell::BehaviorModel::paper();
  Mt19937Source sim(32), seeder(33);
  bell::TrialSource src(model, sim);
  int mono_pass = 0, runs_pass = 0;
  for (int pulse = 0; pulse < 200; ++pulse) {
    std::vector<bell::Trial> trials(65536);
    for (auto& tr : trials) tr = src.next();
    BitVec raw = ext::pack_raw(trials);
    ext::ExtractorConfig ec{raw.size(), 512, 712};
    ec.validate();
    ext::ToeplitzSeed seed{random_bits(ec.seed_len(), seeder)};
    BitVec out = ext::extract_packed(raw, seed, ec);
    if (ext::monobit_p(out) >= 0.01) ++mono_pass;
    if (ext::runs_p(out) >= 0.01) ++runs_pass;
  }

  bool ok = agree && fft_s <= 20.0 && big_match && mono_pass >= 194 && runs_pass >= 194;
  report(5, ok,
         fmt("fft==naive==packed exhaustive n=4..8 and %d/1000 random (%s), paper-scale "
             "n=1.3e7 m=512 fft %.2f s (limit 20 s, packed agreement %s), monobit %d/200 and "
             "runs %d/200 at alpha=0.01 (need >= 194)",
             random_small, agree ? "all equal" : "mismatch", fft_s, big_match ? "yes" : "no",
             mono_pass, runs_pass));
}

// 6. Signature suite: roundtrips, mutation rejection, wire size.
void c6() {
  sig::SigParams params;
  Mt19937Source rng(77);

  int roundtrips = 0;
  for (int kpi = 0; kpi < 5; ++kpi) {
    auto kp = sig::keygen(params, rng);
    for (int i = 0; i < 200; ++i) {
      bytes msg = rng.get(64);
      auto s = sig::sign(kp.sk, msg, rng);
      if (sig::verify(kp.pk, s, msg)) ++roundtrips;
    }
  }

  auto kp = sig::keygen(params, rng);
  bytes msg = rng.get(64);
  auto s = sig::sign(kp.sk, msg, rng);
  bytes wire = s.encode(params);

  int msg_mut = 0, msg_rejected = 0;
  for (std::size_t pos = 0; pos < msg.size(); ++pos) {
    for (int delta = 1; delta < 256; ++delta) {
      bytes m2 = msg;
      m2[pos] ^= static_cast<std::uint8_t>(delta);
      ++msg_mut;
      if (!sig::verify(kp.pk, s, m2)) ++msg_rejected;
    }
  }

  int sig_rejected = 0;
  for (int i = 0; i < 1000; ++i) {
    bytes w2 = wire;
    w2[rng.below(w2.size())] ^= static_cast<std::uint8_t>(1 + rng.below(255));
    if (!sig::verify(kp.pk, w2, msg)) ++sig_rejected;
  }

  double size_rel = std::abs(static_cast<double>(wire.size()) - 2445.0) / 2445.0;
  bool ok = roundtrips == 1000 && msg_rejected == msg_mut && sig_rejected == 1000 &&
            size_rel <= 0.15;
  report(6, ok,
         fmt("%d/1000 roundtrips, %d/%d single-byte message mutations rejected, %d/1000 "
             "signature mutations rejected, wire %zu B vs 2445 B (rel %.3f, limit 0.15)",
             roundtrips, msg_rejected, msg_mut, sig_rejected, wire.size(), size_rel));
}

void mutate_field(beacon::Pulse& p, int field) {
  auto flip = [](bytes& v) {
    if (v.empty())
      v.push_back(1);
    else
      v[0] ^= 1;
  };
  switch (field) {
    case 1: p.uri += "x"; break;
    case 2: p.version += "x"; break;
    case 3: ++p.cipher_suite; break;
    case 4: ++p.period_ms; break;
    case 5: flip(p.certificate_id); break;
    case 6: ++p.chain_index; break;
    case 7: ++p.pulse_index; break;
    case 8: p.timestamp[p.timestamp.size() - 2] ^= 1; break;
    case 9: flip(p.local_random_value); break;
    case 10: flip(p.external_source_id); break;
    case 11: ++p.external_status_code; break;
    case 12: flip(p.external_value); break;
    case 13: flip(p.previous); break;
    case 14: flip(p.hour); break;
    case 15: flip(p.day); break;
    case 16: flip(p.month); break;
    case 17: flip(p.year); break;
    case 18: flip(p.precommitment_value); break;
    case 19: ++p.status_code; break;
    case 20: p.type += "x"; break;
    case 21: p.chsh += "x"; break;
    case 22: p.method += "x"; break;
    case 23: flip(p.signature_rsa); break;
    case 24: flip(p.signature_pqc); break;
    case 25: flip(p.output_value); break;
  }
}

// 7. Beacon chain integrity over a pipeline-fed 100-pulse chain.
void c7() {
  const std::string chain_path = "/tmp/bzk_acceptance_chain.bin";
  const std::string state_path = "/tmp/bzk_acceptance_chain.state";
  std::filesystem::remove(chain_path);
  std::filesystem::remove(state_path);

  Mt19937Source krng(12);
  beacon::BeaconKeys keys;
  keys.legacy = sig::keygen(sig::SigParams{}, krng);
  keys.pqc = sig::keygen(sig::SigParams{}, krng);
  beacon::ChainStore store(chain_path);
  beacon::BeaconEngine engine(beacon::EngineConfig{}, keys, store, state_path);
  pipeline::EntropyPipeline pipe(pipeline::desk_config(), 2001, 2002);

  std::uint64_t t = parse_rfc3339_utc_ms("2023-11-14T22:13:20.000Z");
  engine.prime(pipe.next_block().value());
  for (int i = 0; i < 100; ++i) {
    auto block = pipe.next_block();
    char chsh[32];
    std::snprintf(chsh, sizeof chsh, "%.4f", pipe.last_s());
    engine.emit(std::move(block), t, chsh);
    t += 60000;
  }

  auto audit = beacon::audit_chain(store, keys.legacy.pk, keys.pqc.pk);
  bool audit_ok = store.size() == 100 && audit.empty();

  bool links_ok = true;
  for (std::size_t i = 1; i < store.size(); ++i)
    links_ok = links_ok && store.at(i - 1).precommitment_value ==
                               to_vec(sha512(store.at(i).local_random_value));

  int mutations = 0, detected = 0;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const beacon::Pulse* prev = i ? &store.at(i - 1) : nullptr;
    for (int field = 1; field <= 25; ++field) {
      beacon::Pulse m = store.at(i);
      mutate_field(m, field);
      ++mutations;
      if (!beacon::verify_pulse(m, prev, keys.legacy.pk, keys.pqc.pk).empty()) ++detected;
    }
  }

  bool ok = audit_ok && links_ok && detected == mutations;
  report(7, ok,
         fmt("100-pulse chain audit %s (%zu findings), precommitment/lrv links %s, "
             "%d/%d single-field mutations detected",
             audit_ok ? "clean" : "dirty", audit.size(), links_ok ? "verified" : "broken",
             detected, mutations));

  std::filesystem::remove(chain_path);
  std::filesystem::remove(state_path);
}

// 8. End-to-end proofs: honest acceptance, paper-scale round count, ordering
// attacks, cheating acceptance rate, size scaling.
void c8() {
  const std::string chain_path = "/tmp/bzk_acceptance_zkp.bin";
  const std::string state_path = "/tmp/bzk_acceptance_zkp.state";
  std::filesystem::remove(chain_path);
  std::filesystem::remove(state_path);

  Mt19937Source krng(55);
  beacon::BeaconKeys bkeys;
  bkeys.legacy = sig::keygen(sig::SigParams{}, krng);
  bkeys.pqc = sig::keygen(sig::SigParams{}, krng);
  sig::SigKeypair tkeys = sig::keygen(sig::SigParams{}, krng);

  beacon::ChainStore store(chain_path);
  beacon::BeaconEngine engine(beacon::EngineConfig{}, bkeys, store, state_path);
  ManualClock clock(parse_rfc3339_utc_ms("2023-11-14T22:13:20.000Z"));
  tsa::Authority authority(tkeys, clock);
  CounterDrbg rng(bytes{8, 15});
  engine.prime(rng.get(64));

  svc::LocalTsaClient tsa_client(authority, rng);
  svc::LocalBeaconClient bc(store, [&] {
    engine.emit(rng.get(64), clock.now_ms() + 30000, "2.0072");
    return true;
  });
  zkp::VerifierKeys vkeys{tkeys.pk, bkeys.legacy.pk, bkeys.pqc.pk};

  Mt19937Source irng(56);
  int honest_ok = 0, attacks = 0, attacks_rejected = 0;
  for (int i = 0; i < 100; ++i) {
    auto v = static_cast<std::uint32_t>(4 + irng.below(47));
    auto ef = static_cast<std::uint32_t>(v >= 10 ? 1 + irng.below(2) : 1);
    auto [g, phi] = zkp::gen_instance(v, ef, irng);
    clock.advance(60000);
    zkp::Proof p = zkp::prove(g, phi, 16, tsa_client, bc, rng);
    if (zkp::verify(g, p, vkeys)) ++honest_ok;
    if (i % 5 == 4) {
      zkp::Proof attacked = p;
      attacked.pulse = store.at(0);  // published before this proof's token
      ++attacks;
      if (!zkp::verify(g, attacked, vkeys)) ++attacks_rejected;
    }
  }

  auto [g50, phi50] = zkp::gen_instance(50, 3, irng);
  clock.advance(60000);
  zkp::Proof p50 = zkp::prove(g50, phi50, 64, tsa_client, bc, rng);
  std::uint64_t r50 = p50.rounds.size();
  bool paper_ok = zkp::verify(g50, p50, vkeys) && r50 == zkp::round_count(150, 64) &&
                  r50 + 1 >= 6632 && r50 <= 6633;

  auto [ga, phia] = zkp::gen_instance(50, 3, irng);
  clock.advance(60000);
  zkp::ProveStats sa;
  zkp::Proof pa = zkp::prove(ga, phia, 16, tsa_client, bc, rng, &sa);
  auto [gb, phib] = zkp::gen_instance(100, 3, irng);
  clock.advance(60000);
  zkp::ProveStats sb;
  zkp::Proof pb = zkp::prove(gb, phib, 16, tsa_client, bc, rng, &sb);
  bool sizes_verify = zkp::verify(ga, pa, vkeys) && zkp::verify(gb, pb, vkeys);
  double ratio = static_cast<double>(sb.proof_bytes) / static_cast<double>(sa.proof_bytes);
  bool ratio_ok = sizes_verify && ratio >= 3.2 && ratio <= 4.8;

  // cheating prover with exactly one monochromatic edge, challenges derived
  // exactly as the verifier does from a fresh 64-byte value per attempt
  zkp::Graph g9;
  g9.v = 9;
  zkp::Coloring phi9{{1, 1, 1, 2, 2, 2, 3, 3, 3}};
  for (std::uint32_t u = 0; u < 9; ++u)
    for (std::uint32_t w = u + 1; w < 9; ++w)
      if (phi9.phi[u] != phi9.phi[w]) g9.edges.emplace_back(u, w);
  g9.edges.pop_back();
  g9.edges.emplace_back(0, 1);  // the single bad edge
  std::sort(g9.edges.begin(), g9.edges.end());
  g9.validate();
  std::uint64_t bad_edges = 0;
  for (auto [u, w] : g9.edges)
    if (phi9.phi[u] == phi9.phi[w]) ++bad_edges;

  const std::uint64_t mc_rounds = 100000, r_mc = 16;
  const double p_acc = std::pow(26.0 / 27.0, 16.0);
  CounterDrbg mc_rng(bytes{0xd9, 0x01});
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < mc_rounds; ++i) {
    std::vector<zkp::PreparedRound> rounds(r_mc);
    for (auto& pr : rounds) pr = zkp::prepare_round(phi9, mc_rng);
    auto idx = zkp::sample_edges(mc_rng.get(64), g9.edges.size(), r_mc);
    bool all_pass = true;
    for (std::uint64_t r = 0; r < r_mc && all_pass; ++r) {
      auto [u, w] = g9.edges[idx[r]];
      const auto& pr = rounds[r];
      all_pass = commit::open(pr.commitments[u], pr.openings[u]) &&
                 commit::open(pr.commitments[w], pr.openings[w]) &&
                 pr.openings[u].payload[0] != pr.openings[w].payload[0];
    }
    if (all_pass) ++accepted;
  }
  double phat = static_cast<double>(accepted) / static_cast<double>(mc_rounds);
  double sigma3 = 3.0 * std::sqrt(p_acc * (1.0 - p_acc) / static_cast<double>(mc_rounds));
  bool mc_ok = bad_edges == 1 && g9.edges.size() == 27 && std::abs(phat - p_acc) <= sigma3;

  bool ok = honest_ok == 100 && attacks_rejected == attacks && paper_ok && ratio_ok && mc_ok;
  report(8, ok,
         fmt("honest %d/100 verified, paper scale V=50 lambda=64 gave %llu rounds (formula "
             "%llu, table 6632 +-1, verified %s), ordering attacks rejected %d/%d, cheater "
             "accepted %.4f vs ((E-1)/E)^16 = %.4f (3 sigma %.4f), size ratio "
             "V=100:V=50 = %.2f (band [3.2,4.8])",
             honest_ok, (unsigned long long)r50, (unsigned long long)zkp::round_count(150, 64),
             paper_ok ? "yes" : "no", attacks_rejected, attacks, phat, p_acc, sigma3, ratio));

  std::filesystem::remove(chain_path);
  std::filesystem::remove(state_path);
}

// 9. Spacetime inequalities for the published geometry.
void c9() {
  Timer t;
  auto ok_res = bell::check_spacetime(bell::SpacetimeConfig::paper());
  bool all_pass = ok_res.size() == 4;
  for (const auto& r : ok_res) all_pass = all_pass && r.pass;

  auto collapsed = bell::SpacetimeConfig::paper();
  collapsed.sa_m = 0.0;
  collapsed.sb_m = 0.0;
  auto bad_res = bell::check_spacetime(collapsed);
  bool all_fail = bad_res.size() == 4;
  for (const auto& r : bad_res) all_fail = all_fail && !r.pass;

  double el = t.elapsed();
  bool ok = all_pass && all_fail && el < 1.0;
  report(9, ok,
         fmt("paper geometry: 4/4 inequalities hold (%s), zeroed distances: 4/4 fail (%s), "
             "%.3f s (limit 1 s)",
             all_pass ? "yes" : "no", all_fail ? "yes" : "no", el));
}

void run(int num, void (*fn)()) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(num, false, fmt("unhandled exception: %s", e.what()));
  }
}

}  // namespace

int main() {
  run(1, c1);
  run(2, c2);
  run(3, c3);
  run(4, c4);
  run(5, c5);
  run(6, c6);
  run(7, c7);
  run(8, c8);
  run(9, c9);
  std::printf("%d/9 criteria passed\n", 9 - g_failed);
  return g_failed == 0 ? 0 : 1;
}
