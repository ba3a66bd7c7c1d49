// SPDX-License-Identifier: Apache-2.0
//
// bzk: orchestration CLI. Runs the beacon and timestamp services over the
// simulated entropy pipeline, generates and checks proofs, audits chains,
// and reproduces the benchmark table.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bzk/beacon.hpp"
#include "bzk/bell_sim.hpp"
#include "bzk/bench.hpp"
#include "bzk/clock.hpp"
#include "bzk/extractor.hpp"
#include "bzk/lattice_sig.hpp"
#include "bzk/pipeline.hpp"
#include "bzk/qpe.hpp"
#include "bzk/services.hpp"
#include "bzk/timestamp.hpp"
#include "bzk/zkp3col.hpp"

namespace {

using namespace bzk;

constexpr int kOk = 0;
constexpr int kUsageError = 2;
constexpr int kCheckFailed = 3;
constexpr int kServiceError = 4;
constexpr int kInternalError = 5;

bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("cannot write " + path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string format_chsh(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", s);
  return buf;
}

sig::SigKeypair generate_keypair(RandomSource& rng) {
  return sig::keygen(sig::SigParams{}, rng);
}

void save_keypair(const std::string& dir, const std::string& name, const sig::SigKeypair& kp) {
  write_file(dir + "/" + name + ".pk", kp.pk.encode());
  write_file(dir + "/" + name + ".sk", kp.sk.encode());
}

sig::SigKeypair load_keypair(const std::string& dir, const std::string& name) {
  sig::SigKeypair kp;
  kp.pk = sig::PublicKey::decode(read_file(dir + "/" + name + ".pk"));
  kp.sk = sig::SecretKey::decode(read_file(dir + "/" + name + ".sk"));
  return kp;
}

beacon::BeaconKeys load_beacon_keys(const std::string& dir) {
  return beacon::BeaconKeys{load_keypair(dir, "beacon_legacy"), load_keypair(dir, "beacon_pqc")};
}

struct InstanceFile {
  zkp::Graph graph;
  std::optional<zkp::Coloring> witness;
};

std::string instance_to_json(const zkp::Graph& g, const zkp::Coloring* phi) {
  nlohmann::json j;
  j["v"] = g.v;
  auto& edges = j["edges"] = nlohmann::json::array();
  for (auto [u, w] : g.edges) edges.push_back({u, w});
  if (phi) j["phi"] = phi->phi;
  return j.dump();
}

InstanceFile load_instance(const std::string& path) {
  bytes raw = read_file(path);
  nlohmann::json j = nlohmann::json::parse(raw.begin(), raw.end());
  InstanceFile f;
  f.graph.v = j.at("v").get<std::uint32_t>();
  for (const auto& e : j.at("edges"))
    f.graph.edges.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>());
  f.graph.validate();
  if (j.contains("phi")) {
    zkp::Coloring phi;
    phi.phi = j.at("phi").get<std::vector<std::uint8_t>>();
    f.witness = std::move(phi);
  }
  return f;
}

int print_findings(const std::vector<std::string>& findings, const std::string& subject) {
  if (findings.empty()) {
    std::cout << subject << ": OK\n";
    return kOk;
  }
  std::cout << subject << ": " << findings.size() << " finding(s)\n";
  for (const auto& f : findings) std::cout << "  - " << f << "\n";
  return kCheckFailed;
}

// ---------------------------------------------------------------------------

int cmd_keygen(const std::string& dir) {
  std::filesystem::create_directories(dir);
  OsRandom rng;
  save_keypair(dir, "beacon_legacy", generate_keypair(rng));
  save_keypair(dir, "beacon_pqc", generate_keypair(rng));
  save_keypair(dir, "tsa", generate_keypair(rng));
  std::cout << "wrote beacon_legacy, beacon_pqc, tsa keypairs to " << dir << "\n";
  return kOk;
}

int cmd_spacetime() {
  auto results = bell::check_spacetime(bell::SpacetimeConfig::paper());
  bool all = true;
  for (const auto& r : results) {
    std::printf("%-26s lhs=%10.2f ns  rhs=%10.2f ns  slack=%8.2f ns  %s\n", r.name.c_str(),
                r.lhs_ns, r.rhs_ns, r.slack_ns, r.pass ? "PASS" : "FAIL");
    all = all && r.pass;
  }
  return all ? kOk : kCheckFailed;
}

int cmd_qpe_params(bool paper) {
  auto cfg = paper ? pipeline::paper_config() : pipeline::desk_config();
  const auto& p = cfg.params;
  std::printf("profile:        %s\n", paper ? "paper" : "desk");
  std::printf("k_exp:          %.0f\n", p.k_exp);
  std::printf("eps_h:          %g\n", p.eps_h);
  std::printf("eps_x:          %g\n", p.eps_x);
  std::printf("kappa:          %g\n", p.kappa);
  std::printf("alpha:          %.6f\n", p.alpha);
  std::printf("k:              %.6f\n", p.k);
  std::printf("h_s:            %.6f\n", p.h_s);
  std::printf("threshold_bits: %.6f\n", p.threshold_bits());
  std::printf("n_max:          %llu\n", static_cast<unsigned long long>(p.n_max));
  std::printf("expected_stop:  %.0f trials\n",
              qpe::expected_stopping(cfg.model, cfg.table, p, cfg.mode));
  return kOk;
}

int cmd_extractor_selftest(std::uint64_t instances, std::uint64_t seed) {
  Mt19937Source rng(seed);
  for (std::uint64_t i = 0; i < instances; ++i) {
    std::uint64_t n = 4 + rng.below(61);
    std::uint64_t m = 1 + rng.below(n);
    ext::ExtractorConfig cfg{n, m, n};
    BitVec raw(n);
    for (std::uint64_t b = 0; b < n; ++b) raw.set(b, rng.below(2));
    ext::ToeplitzSeed seed_bits;
    seed_bits.bits = BitVec(cfg.seed_len());
    for (std::uint64_t b = 0; b < cfg.seed_len(); ++b) seed_bits.bits.set(b, rng.below(2));
    auto a = ext::extract_naive(raw, seed_bits, cfg);
    auto b = ext::extract_packed(raw, seed_bits, cfg);
    auto c = ext::extract_fft(raw, seed_bits, cfg);
    if (!(a == b && b == c)) {
      std::cout << "route mismatch at instance " << i << " (n=" << n << ", m=" << m << ")\n";
      return kCheckFailed;
    }
  }
  std::cout << "extractor selftest: " << instances << " instances, all routes agree\n";
  return kOk;
}

int cmd_beacon_run(const std::string& store_path, const std::string& state_path,
                   const std::string& keys_dir, std::uint64_t period_ms, int port,
                   std::uint64_t pulses, bool paper_profile, std::uint64_t sim_seed) {
  beacon::BeaconKeys keys = load_beacon_keys(keys_dir);
  beacon::ChainStore store(store_path);
  beacon::EngineConfig cfg;
  cfg.period_ms = period_ms;
  beacon::BeaconEngine engine(cfg, std::move(keys), store, state_path);
  auto pcfg = paper_profile ? pipeline::paper_config() : pipeline::desk_config();
  pipeline::EntropyPipeline pipe(pcfg, sim_seed, sim_seed ^ 0x5eedULL);
  SystemClock clock;

  svc::BeaconService service(engine, store, pipe, clock,
                             {.host = "127.0.0.1", .port = port, .period_ms = period_ms});
  int bound = service.start();
  std::cout << "beacon listening on 127.0.0.1:" << bound << " period_ms=" << period_ms << "\n";

  svc::HttpBeaconClient watcher("http://127.0.0.1:" + std::to_string(bound));
  for (;;) {
    std::this_thread::sleep_for(std::chrono::milliseconds(period_ms));
    if (pulses == 0) continue;
    auto last = watcher.last();
    if (last && last->pulse_index >= pulses) break;
  }
  service.stop();
  std::cout << "emitted " << pulses << " pulses, store at " << store_path << "\n";
  return kOk;
}

int cmd_beacon_audit(const std::string& store_path, const std::string& keys_dir) {
  beacon::BeaconKeys keys = load_beacon_keys(keys_dir);
  beacon::ChainStore store(store_path);
  auto findings = beacon::audit_chain(store, keys.legacy.pk, keys.pqc.pk);
  std::cout << "chain length " << store.size() << "\n";
  return print_findings(findings, "audit");
}

int cmd_beacon_pulse(const std::string& url, bool last, std::uint64_t chain,
                     std::uint64_t index, std::uint64_t time_ms) {
  svc::HttpBeaconClient client(url);
  std::optional<beacon::Pulse> p;
  if (last)
    p = client.last();
  else if (time_ms)
    p = client.pulse_after(time_ms - 1);
  else
    p = client.by_index(chain, index);
  if (!p) {
    std::cout << "no such pulse\n";
    return kServiceError;
  }
  std::cout << p->to_json() << "\n";
  return kOk;
}

int cmd_tsa_run(const std::string& keys_dir, int port, std::uint64_t duration_s) {
  sig::SigKeypair kp = load_keypair(keys_dir, "tsa");
  SystemClock clock;
  tsa::Authority authority(std::move(kp), clock);
  svc::TsaService service(authority, {.host = "127.0.0.1", .port = port});
  int bound = service.start();
  std::cout << "tsa listening on 127.0.0.1:" << bound << "\n";
  if (duration_s == 0) {
    for (;;) std::this_thread::sleep_for(std::chrono::hours(24));
  }
  std::this_thread::sleep_for(std::chrono::seconds(duration_s));
  service.stop();
  return kOk;
}

int cmd_tsa_verify_token(const std::string& token_path, const std::string& pk_path) {
  bytes raw = read_file(token_path);
  auto tok = tsa::TimestampToken::from_json(std::string(raw.begin(), raw.end()));
  if (!tok) {
    std::cout << "malformed token\n";
    return kCheckFailed;
  }
  auto pk = sig::PublicKey::decode(read_file(pk_path));
  bool ok = tsa::verify_token(*tok, pk);
  std::cout << (ok ? "token OK" : "token INVALID") << "\n";
  return ok ? kOk : kCheckFailed;
}

int cmd_zkp_gen(std::uint32_t v, std::uint32_t edge_factor, const std::string& out,
                std::uint64_t seed) {
  Mt19937Source rng(seed);
  auto [g, phi] = zkp::gen_instance(v, edge_factor, rng);
  write_text(out, instance_to_json(g, &phi));
  std::cout << "instance v=" << g.v << " edges=" << g.edges.size() << " -> " << out << "\n";
  return kOk;
}

int cmd_zkp_prove(const std::string& instance_path, std::uint32_t lambda,
                  const std::string& beacon_url, const std::string& tsa_url,
                  const std::string& out) {
  InstanceFile inst = load_instance(instance_path);
  if (!inst.witness) {
    std::cout << "instance file has no witness coloring\n";
    return kUsageError;
  }
  svc::HttpTsaClient tsa_client(tsa_url);
  svc::HttpBeaconClient beacon_client(beacon_url);
  OsRandom rng;
  zkp::ProveStats stats;
  zkp::Proof proof =
      zkp::prove(inst.graph, *inst.witness, lambda, tsa_client, beacon_client, rng, &stats);
  write_file(out, proof.encode());
  std::printf("proof: rounds=%llu commit=%.3fs respond=%.3fs size=%zu bytes -> %s\n",
              static_cast<unsigned long long>(stats.rounds), stats.commit_s, stats.respond_s,
              stats.proof_bytes, out.c_str());
  return kOk;
}

int cmd_zkp_verify(const std::string& instance_path, const std::string& proof_path,
                   const std::string& beacon_url, const std::string& tsa_url,
                   const std::string& pk_ts_path, const std::string& pk_legacy_path,
                   const std::string& pk_pqc_path) {
  InstanceFile inst = load_instance(instance_path);
  auto proof = zkp::Proof::decode(read_file(proof_path));
  if (!proof) {
    std::cout << "malformed proof\n";
    return kCheckFailed;
  }
  zkp::VerifierKeys keys;
  if (!pk_ts_path.empty()) {
    keys.ts = sig::PublicKey::decode(read_file(pk_ts_path));
    keys.bc_legacy = sig::PublicKey::decode(read_file(pk_legacy_path));
    keys.bc_pqc = sig::PublicKey::decode(read_file(pk_pqc_path));
  } else {
    svc::HttpTsaClient tsa_client(tsa_url);
    svc::HttpBeaconClient beacon_client(beacon_url);
    keys.ts = tsa_client.fetch_key();
    std::tie(keys.bc_legacy, keys.bc_pqc) = beacon_client.fetch_keys();
  }
  std::vector<std::string> findings;
  zkp::verify(inst.graph, *proof, keys, &findings);
  return print_findings(findings, "proof");
}

// In-process service pair on a shared manual clock; used by bench and demo.
struct LocalStack {
  ManualClock clock{1'700'000'000'000ull};
  OsRandom os_rng;
  sig::SigKeypair tsa_keys;
  beacon::BeaconKeys bc_keys;
  std::filesystem::path dir;
  std::unique_ptr<beacon::ChainStore> store;
  std::unique_ptr<beacon::BeaconEngine> engine;
  pipeline::EntropyPipeline pipe;
  tsa::Authority authority;
  svc::LocalTsaClient tsa_client;
  std::unique_ptr<svc::LocalBeaconClient> bc_client;

  explicit LocalStack(std::uint64_t sim_seed)
      : tsa_keys(generate_keypair(os_rng)),
        bc_keys{generate_keypair(os_rng), generate_keypair(os_rng)},
        dir(std::filesystem::temp_directory_path() /
            ("bzk-local-" + std::to_string(::getpid()) + "-" + std::to_string(sim_seed))),
        pipe(pipeline::desk_config(), sim_seed, sim_seed ^ 0x5eedULL),
        authority(tsa_keys, clock),
        tsa_client(authority, os_rng) {
    std::filesystem::create_directories(dir);
    store = std::make_unique<beacon::ChainStore>((dir / "chain.bin").string());
    engine = std::make_unique<beacon::BeaconEngine>(beacon::EngineConfig{}, bc_keys, *store,
                                                    (dir / "state.json").string());
    auto block = pipe.next_block();
    if (block) engine->prime(*block);
    bc_client = std::make_unique<svc::LocalBeaconClient>(*store, [this] {
      clock.advance(60'000);
      engine->emit(pipe.next_block(), clock.now_ms(), format_chsh(pipe.last_s()));
      return true;
    });
  }

  ~LocalStack() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }

  zkp::VerifierKeys verifier_keys() const {
    return {tsa_keys.pk, bc_keys.legacy.pk, bc_keys.pqc.pk};
  }
};

int cmd_zkp_bench(std::vector<std::uint32_t> vs, std::uint32_t lambda, const std::string& out,
                  std::uint64_t seed) {
  LocalStack stack(seed);
  Mt19937Source rng(seed);
  auto rows = bench::run_grid(vs, lambda, stack.tsa_client, *stack.bc_client,
                              stack.verifier_keys(), rng);
  std::string csv = bench::to_csv(rows);
  if (out.empty() || out == "-")
    std::cout << csv;
  else
    write_text(out, csv);
  return kOk;
}

int cmd_demo(std::uint64_t seed) {
  std::cout << "[1/5] spinning up local beacon + timestamp authority\n";
  LocalStack stack(seed);
  // a few warm-up pulses so the chain has history
  for (int i = 0; i < 3; ++i) {
    stack.clock.advance(60'000);
    stack.engine->emit(stack.pipe.next_block(), stack.clock.now_ms(),
                       format_chsh(stack.pipe.last_s()));
  }

  std::cout << "[2/5] generating a 3-coloring instance (v=12, E=36)\n";
  Mt19937Source rng(seed + 1);
  auto [g, phi] = zkp::gen_instance(12, 3, rng);

  std::cout << "[3/5] proving (lambda=16)\n";
  zkp::ProveStats stats;
  zkp::Proof proof = zkp::prove(g, phi, 16, stack.tsa_client, *stack.bc_client, rng, &stats);
  std::printf("      rounds=%llu commit=%.3fs respond=%.3fs proof=%zu bytes\n",
              static_cast<unsigned long long>(stats.rounds), stats.commit_s, stats.respond_s,
              stats.proof_bytes);

  std::cout << "[4/5] verifying\n";
  std::vector<std::string> findings;
  bool ok = zkp::verify(g, proof, stack.verifier_keys(), &findings);
  for (const auto& f : findings) std::cout << "      finding: " << f << "\n";

  std::cout << "[5/5] auditing the beacon chain\n";
  auto audit = beacon::audit_chain(*stack.store, stack.bc_keys.legacy.pk, stack.bc_keys.pqc.pk);
  for (const auto& f : audit) std::cout << "      finding: " << f << "\n";

  bool all = ok && audit.empty();
  std::cout << (all ? "demo OK" : "demo FAILED") << "\n";
  return all ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"device-independent-randomness NIZKP toolkit"};
  app.require_subcommand(1);

  // keygen
  std::string keys_dir = "keys";
  auto* keygen = app.add_subcommand("keygen", "generate beacon and tsa keypairs");
  keygen->add_option("--out-dir", keys_dir, "output directory");

  // spacetime
  auto* spacetime = app.add_subcommand("spacetime", "check the spacetime-layout inequalities");

  // qpe
  bool qpe_paper = false;
  auto* qpe_cmd = app.add_subcommand("qpe", "print entropy-accounting parameters");
  qpe_cmd->add_flag("--paper", qpe_paper, "paper profile instead of desk profile");

  // extractor selftest
  std::uint64_t ext_instances = 200, ext_seed = 1;
  auto* ext_cmd = app.add_subcommand("extractor", "cross-check the extractor routes");
  ext_cmd->add_option("--instances", ext_instances, "random instances");
  ext_cmd->add_option("--seed", ext_seed, "rng seed");

  // beacon
  auto* beacon_cmd = app.add_subcommand("beacon", "beacon service and chain tools");
  beacon_cmd->require_subcommand(1);
  std::string store_path = "chain.bin", state_path = "beacon_state.json";
  std::uint64_t period_ms = 60000, pulse_budget = 0, sim_seed = 42;
  int beacon_port = 0;
  bool beacon_paper = false;
  auto* beacon_run = beacon_cmd->add_subcommand("run", "emit pulses and serve the chain");
  beacon_run->add_option("--store", store_path, "chain store path");
  beacon_run->add_option("--state", state_path, "pending-state path");
  beacon_run->add_option("--keys", keys_dir, "key directory");
  beacon_run->add_option("--period-ms", period_ms, "pulse period (>=100)")
      ->check(CLI::Range(std::uint64_t{100}, std::uint64_t{86'400'000}));
  beacon_run->add_option("--port", beacon_port, "listen port (0 = auto)");
  beacon_run->add_option("--pulses", pulse_budget, "stop after N pulses (0 = run forever)");
  beacon_run->add_flag("--paper", beacon_paper, "paper-scale entropy accounting");
  beacon_run->add_option("--sim-seed", sim_seed, "simulation seed");

  auto* beacon_audit = beacon_cmd->add_subcommand("audit", "verify a stored chain");
  beacon_audit->add_option("--store", store_path, "chain store path")->required();
  beacon_audit->add_option("--keys", keys_dir, "key directory");

  std::string beacon_url = "http://127.0.0.1:8880";
  bool pulse_last = false;
  std::uint64_t pulse_chain = 1, pulse_index = 1, pulse_time = 0;
  auto* beacon_pulse = beacon_cmd->add_subcommand("pulse", "fetch a pulse from a service");
  beacon_pulse->add_option("--url", beacon_url, "service base url");
  beacon_pulse->add_flag("--last", pulse_last, "latest pulse");
  beacon_pulse->add_option("--chain", pulse_chain, "chain index");
  beacon_pulse->add_option("--index", pulse_index, "pulse index");
  beacon_pulse->add_option("--time", pulse_time, "first pulse at-or-after unix ms");

  // tsa
  auto* tsa_cmd = app.add_subcommand("tsa", "timestamp authority");
  tsa_cmd->require_subcommand(1);
  int tsa_port = 0;
  std::uint64_t tsa_duration = 0;
  auto* tsa_run = tsa_cmd->add_subcommand("run", "serve timestamp requests");
  tsa_run->add_option("--keys", keys_dir, "key directory");
  tsa_run->add_option("--port", tsa_port, "listen port (0 = auto)");
  tsa_run->add_option("--duration-s", tsa_duration, "stop after N seconds (0 = run forever)");

  std::string token_path, pk_path;
  auto* tsa_verify = tsa_cmd->add_subcommand("verify-token", "check a stored token");
  tsa_verify->add_option("--token", token_path, "token JSON file")->required();
  tsa_verify->add_option("--pk", pk_path, "authority public key file")->required();

  // zkp
  auto* zkp_cmd = app.add_subcommand("zkp", "prover/verifier");
  zkp_cmd->require_subcommand(1);
  std::uint32_t gen_v = 50, gen_ef = 3;
  std::uint64_t gen_seed = 7;
  std::string instance_path = "instance.json";
  auto* zkp_gen = zkp_cmd->add_subcommand("gen-instance", "random 3-colorable instance");
  zkp_gen->add_option("--v", gen_v, "vertex count (>=4)");
  zkp_gen->add_option("--edge-factor", gen_ef, "edges per vertex");
  zkp_gen->add_option("--out", instance_path, "output file");
  zkp_gen->add_option("--seed", gen_seed, "rng seed");

  std::uint32_t lambda = 64;
  std::string tsa_url = "http://127.0.0.1:8881", proof_path = "proof.bin";
  auto* zkp_prove = zkp_cmd->add_subcommand("prove", "produce a proof against live services");
  zkp_prove->add_option("--instance", instance_path, "instance file")->required();
  zkp_prove->add_option("--lambda", lambda, "soundness parameter");
  zkp_prove->add_option("--beacon-url", beacon_url, "beacon base url");
  zkp_prove->add_option("--tsa-url", tsa_url, "tsa base url");
  zkp_prove->add_option("--out", proof_path, "proof output file");

  std::string pk_ts_path, pk_legacy_path, pk_pqc_path;
  auto* zkp_verify = zkp_cmd->add_subcommand("verify", "check a stored proof");
  zkp_verify->add_option("--instance", instance_path, "instance file")->required();
  zkp_verify->add_option("--proof", proof_path, "proof file")->required();
  zkp_verify->add_option("--beacon-url", beacon_url, "beacon base url (for keys)");
  zkp_verify->add_option("--tsa-url", tsa_url, "tsa base url (for keys)");
  zkp_verify->add_option("--pk-ts", pk_ts_path, "authority public key file (offline mode)");
  zkp_verify->add_option("--pk-legacy", pk_legacy_path, "beacon legacy public key file");
  zkp_verify->add_option("--pk-pqc", pk_pqc_path, "beacon pqc public key file");

  std::vector<std::uint32_t> bench_vs{50, 100};
  std::string bench_out = "-";
  std::uint64_t bench_seed = 11;
  auto* zkp_bench = zkp_cmd->add_subcommand("bench", "table of prove/verify costs");
  zkp_bench->add_option("--vs", bench_vs, "vertex counts");
  zkp_bench->add_option("--lambda", lambda, "soundness parameter");
  zkp_bench->add_option("--out", bench_out, "csv output file ('-' = stdout)");
  zkp_bench->add_option("--seed", bench_seed, "rng seed");

  // demo
  std::uint64_t demo_seed = 3;
  auto* demo = app.add_subcommand("demo", "end-to-end walkthrough on local services");
  demo->add_option("--seed", demo_seed, "rng seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen) return cmd_keygen(keys_dir);
    if (*spacetime) return cmd_spacetime();
    if (*qpe_cmd) return cmd_qpe_params(qpe_paper);
    if (*ext_cmd) return cmd_extractor_selftest(ext_instances, ext_seed);
    if (*beacon_cmd) {
      if (*beacon_run)
        return cmd_beacon_run(store_path, state_path, keys_dir, period_ms, beacon_port,
                              pulse_budget, beacon_paper, sim_seed);
      if (*beacon_audit) return cmd_beacon_audit(store_path, keys_dir);
      if (*beacon_pulse)
        return cmd_beacon_pulse(beacon_url, pulse_last, pulse_chain, pulse_index, pulse_time);
    }
    if (*tsa_cmd) {
      if (*tsa_run) return cmd_tsa_run(keys_dir, tsa_port, tsa_duration);
      if (*tsa_verify) return cmd_tsa_verify_token(token_path, pk_path);
    }
    if (*zkp_cmd) {
      if (*zkp_gen) return cmd_zkp_gen(gen_v, gen_ef, instance_path, gen_seed);
      if (*zkp_prove)
        return cmd_zkp_prove(instance_path, lambda, beacon_url, tsa_url, proof_path);
      if (*zkp_verify)
        return cmd_zkp_verify(instance_path, proof_path, beacon_url, tsa_url, pk_ts_path,
                              pk_legacy_path, pk_pqc_path);
      if (*zkp_bench) return cmd_zkp_bench(bench_vs, lambda, bench_out, bench_seed);
    }
    if (*demo) return cmd_demo(demo_seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kServiceError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsageError;
}
