// SPDX-License-Identifier: Apache-2.0
#include "bzk/zkp3col.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

namespace bzk::zkp {

namespace {

using boost::multiprecision::cpp_int;

constexpr char kProofMagic[4] = {'Z', 'K', 'P', '1'};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ((e-1)/e)^r <= 2^-lambda, evaluated exactly.
bool rounds_sufficient(std::uint64_t e, std::uint32_t lambda, std::uint64_t r) {
  cpp_int lhs = boost::multiprecision::pow(cpp_int(e - 1), static_cast<unsigned>(r));
  lhs <<= lambda;
  cpp_int rhs = boost::multiprecision::pow(cpp_int(e), static_cast<unsigned>(r));
  return lhs <= rhs;
}

void check_round(const Graph& g, const RoundTranscript& rt, std::uint64_t want_index,
                 std::size_t round_num, std::vector<std::string>& f) {
  std::string tag = "round " + std::to_string(round_num);
  if (rt.commitments.size() != g.v) {
    f.push_back(tag + ": commitment count mismatch");
    return;
  }
  if (rt.edge_index != want_index) {
    f.push_back(tag + ": edge index does not match the challenge randomness");
    return;
  }
  if (rt.edge_index >= g.edges.size()) {
    f.push_back(tag + ": edge index out of range");
    return;
  }
  auto [u, w] = g.edges[rt.edge_index];
  if (!commit::open(rt.commitments[u], rt.d_j))
    f.push_back(tag + ": opening for the smaller endpoint fails");
  if (!commit::open(rt.commitments[w], rt.d_k))
    f.push_back(tag + ": opening for the larger endpoint fails");
  int cj = rt.d_j.payload.size() == 1 ? rt.d_j.payload[0] : -1;
  int ck = rt.d_k.payload.size() == 1 ? rt.d_k.payload[0] : -1;
  if (cj < 1 || cj > 3 || ck < 1 || ck > 3)
    f.push_back(tag + ": opened payload is not a color");
  else if (cj == ck)
    f.push_back(tag + ": endpoint colors equal");
}

bool finish(std::vector<std::string>& f, std::vector<std::string>* out) {
  if (out) *out = std::move(f);
  return out ? out->empty() : f.empty();
}

}  // namespace

void Graph::validate() const {
  if (v == 0) throw std::invalid_argument("Graph: vertex count must be positive");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, w] = edges[i];
    if (u >= w) throw std::invalid_argument("Graph: edges must satisfy u < w");
    if (w >= v) throw std::invalid_argument("Graph: vertex out of range");
    if (i && edges[i - 1] >= edges[i])
      throw std::invalid_argument("Graph: edges must be sorted and distinct");
  }
}

bytes Graph::encode() const {
  bytes out;
  append_be32(out, v);
  append_be32(out, static_cast<std::uint32_t>(edges.size()));
  for (auto [u, w] : edges) {
    append_be32(out, u);
    append_be32(out, w);
  }
  return out;
}

Graph Graph::decode(std::span<const std::uint8_t> data) {
  ByteReader r(data);
  Graph g;
  g.v = r.be32();
  std::uint32_t count = r.be32();
  g.edges.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t u = r.be32();
    std::uint32_t w = r.be32();
    g.edges.emplace_back(u, w);
  }
  if (!r.done()) throw std::invalid_argument("Graph: trailing bytes");
  g.validate();
  return g;
}

Digest64 Graph::digest() const { return sha512(encode()); }

bool verify_witness(const Graph& g, const Coloring& c) {
  if (c.phi.size() != g.v) return false;
  for (std::uint8_t col : c.phi)
    if (col < 1 || col > 3) return false;
  for (auto [u, w] : g.edges)
    if (c.phi[u] == c.phi[w]) return false;
  return true;
}

std::uint64_t round_count(std::uint64_t edge_count, std::uint32_t lambda) {
  if (edge_count == 0) throw std::invalid_argument("round_count: edge_count must be >= 1");
  if (lambda == 0) throw std::invalid_argument("round_count: lambda must be positive");
  if (edge_count == 1) return 1;
  long double per_round =
      std::log2(static_cast<long double>(edge_count)) -
      std::log2(static_cast<long double>(edge_count - 1));
  auto r = static_cast<std::uint64_t>(std::ceil(static_cast<long double>(lambda) / per_round));
  if (r == 0) r = 1;
  while (!rounds_sufficient(edge_count, lambda, r)) ++r;
  while (r > 1 && rounds_sufficient(edge_count, lambda, r - 1)) --r;
  return r;
}

std::pair<Graph, Coloring> gen_instance(std::uint32_t v, std::uint32_t edge_factor,
                                        RandomSource& rng) {
  if (v < 4) throw std::invalid_argument("gen_instance: v must be >= 4");
  if (edge_factor == 0) throw std::invalid_argument("gen_instance: edge_factor must be >= 1");

  std::vector<std::uint32_t> order(v);
  for (std::uint32_t i = 0; i < v; ++i) order[i] = i;
  for (std::uint32_t i = v - 1; i > 0; --i)
    std::swap(order[i], order[rng.below(i + 1)]);
  Coloring phi;
  phi.phi.resize(v);
  std::uint64_t count[3] = {0, 0, 0};
  for (std::uint32_t i = 0; i < v; ++i) {
    phi.phi[order[i]] = static_cast<std::uint8_t>(1 + i % 3);
    ++count[i % 3];
  }

  std::uint64_t cross =
      count[0] * count[1] + count[0] * count[2] + count[1] * count[2];
  std::uint64_t want = static_cast<std::uint64_t>(edge_factor) * v;
  if (want > cross)
    throw std::invalid_argument("gen_instance: coloring admits only " + std::to_string(cross) +
                                " cross-color edges, need " + std::to_string(want));

  std::set<std::pair<std::uint32_t, std::uint32_t>> chosen;
  while (chosen.size() < want) {
    auto u = static_cast<std::uint32_t>(rng.below(v));
    auto w = static_cast<std::uint32_t>(rng.below(v));
    if (u == w || phi.phi[u] == phi.phi[w]) continue;
    if (u > w) std::swap(u, w);
    chosen.emplace(u, w);
  }

  Graph g;
  g.v = v;
  g.edges.assign(chosen.begin(), chosen.end());
  g.validate();
  return {std::move(g), std::move(phi)};
}

std::vector<std::uint64_t> sample_edges(std::span<const std::uint8_t> r,
                                        std::uint64_t edge_count, std::uint64_t rounds) {
  if (edge_count == 0) throw std::invalid_argument("sample_edges: edge_count must be >= 1");
  // Largest multiple of edge_count representable in the 2^64 word range.
  std::uint64_t rem =
      (std::numeric_limits<std::uint64_t>::max() % edge_count + 1) % edge_count;
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem + 1;  // 0 means 2^64

  bytes msg(r.begin(), r.end());
  msg.resize(msg.size() + 8);
  std::uint64_t ctr = 0;
  Digest32 block{};
  std::size_t word = 4;

  std::vector<std::uint64_t> out;
  out.reserve(rounds);
  while (out.size() < rounds) {
    if (word == 4) {
      store_be64(msg.data() + msg.size() - 8, ctr++);
      block = sha256(msg);
      word = 0;
    }
    std::uint64_t w = load_be64(block.data() + 8 * word);
    ++word;
    if (rem != 0 && w >= limit) continue;
    out.push_back(w % edge_count);
  }
  return out;
}

PreparedRound prepare_round(const Coloring& phi, RandomSource& rng) {
  std::array<std::uint8_t, 3> perm{1, 2, 3};
  for (std::uint32_t i = 2; i > 0; --i)
    std::swap(perm[i], perm[rng.below(i + 1)]);

  PreparedRound pr;
  std::size_t n = phi.phi.size();
  pr.colors.resize(n);
  pr.commitments.reserve(n);
  pr.openings.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t col = perm[phi.phi[i] - 1];
    pr.colors[i] = col;
    auto [c, d] = commit::commit(std::span<const std::uint8_t>(&col, 1), rng);
    pr.commitments.push_back(c);
    pr.openings.push_back(std::move(d));
  }
  return pr;
}

Digest64 commit_digest(const Digest64& graph_digest, std::uint32_t lambda, std::uint64_t rounds,
                       std::span<const RoundTranscript> transcripts) {
  Hasher h(Hasher::Alg::sha512);
  h.update(graph_digest);
  std::uint8_t hdr[12];
  store_be32(hdr, lambda);
  store_be64(hdr + 4, rounds);
  h.update(std::span<const std::uint8_t>(hdr, sizeof hdr));
  for (const auto& rt : transcripts)
    for (const auto& c : rt.commitments) h.update(c.digest);
  Digest64 out;
  bytes d = h.finish();
  std::copy(d.begin(), d.end(), out.begin());
  return out;
}

bytes Proof::encode() const {
  bytes out;
  out.reserve(2048 + rounds.size() * (32ull * v + 96));
  out.insert(out.end(), kProofMagic, kProofMagic + 4);
  append_bytes(out, graph_digest);
  append_be32(out, lambda);
  append_be32(out, v);
  append_be32(out, edge_count);
  append_be64(out, rounds.size());
  for (const auto& rt : rounds) {
    if (rt.commitments.size() != v)
      throw std::logic_error("Proof: round commitment count does not match v");
    for (const auto& c : rt.commitments) append_bytes(out, c.digest);
    append_be64(out, rt.edge_index);
    for (const auto* d : {&rt.d_j, &rt.d_k}) {
      bytes db = d->encode();
      append_be32(out, static_cast<std::uint32_t>(db.size()));
      append_bytes(out, db);
    }
  }
  bytes tok = ts_token.encode();
  append_be32(out, static_cast<std::uint32_t>(tok.size()));
  append_bytes(out, tok);
  bytes pb = pulse.encode();
  append_be32(out, static_cast<std::uint32_t>(pb.size()));
  append_bytes(out, pb);
  return out;
}

std::optional<Proof> Proof::decode(std::span<const std::uint8_t> data) {
  try {
    ByteReader r(data);
    auto magic = r.take(4);
    if (!std::equal(magic.begin(), magic.end(), kProofMagic)) return std::nullopt;
    Proof p;
    auto gd = r.take(64);
    std::copy(gd.begin(), gd.end(), p.graph_digest.begin());
    p.lambda = r.be32();
    p.v = r.be32();
    p.edge_count = r.be32();
    std::uint64_t count = r.be64();
    p.rounds.resize(count);
    for (auto& rt : p.rounds) {
      rt.commitments.resize(p.v);
      for (auto& c : rt.commitments) {
        auto cb = r.take(32);
        std::copy(cb.begin(), cb.end(), c.digest.begin());
      }
      rt.edge_index = r.be64();
      for (auto* d : {&rt.d_j, &rt.d_k}) {
        std::uint32_t len = r.be32();
        *d = commit::Decommitment::decode(r.take(len));
      }
    }
    std::uint32_t tok_len = r.be32();
    auto tok = tsa::TimestampToken::decode(r.take(tok_len));
    if (!tok) return std::nullopt;
    p.ts_token = *tok;
    std::uint32_t pulse_len = r.be32();
    p.pulse = beacon::Pulse::decode(r.take(pulse_len));
    if (!r.done()) return std::nullopt;
    return p;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string Proof::to_json(bool include_rounds) const {
  nlohmann::json j;
  j["graph_digest"] = to_hex(graph_digest);
  j["lambda"] = lambda;
  j["v"] = v;
  j["edge_count"] = edge_count;
  j["rounds"] = rounds.size();
  j["ts_token"] = nlohmann::json::parse(ts_token.to_json());
  j["pulse"] = nlohmann::json::parse(pulse.to_json());
  if (include_rounds) {
    auto& arr = j["round_data"] = nlohmann::json::array();
    for (const auto& rt : rounds) {
      nlohmann::json rj;
      auto& comms = rj["commitments"] = nlohmann::json::array();
      for (const auto& c : rt.commitments) comms.push_back(to_hex(c.digest));
      rj["edge_index"] = rt.edge_index;
      rj["d_j"] = to_hex(rt.d_j.encode());
      rj["d_k"] = to_hex(rt.d_k.encode());
      arr.push_back(std::move(rj));
    }
  }
  return j.dump();
}

Proof prove(const Graph& g, const Coloring& phi, std::uint32_t lambda, TsaClient& tsa,
            BeaconClient& bc, RandomSource& rng, ProveStats* stats) {
  g.validate();
  if (!verify_witness(g, phi))
    throw std::invalid_argument("prove: coloring is not a valid witness");
  std::uint64_t e = g.edges.size();
  if (e == 0) throw std::invalid_argument("prove: graph has no edges");
  std::uint64_t r_count = round_count(e, lambda);

  Proof p;
  p.graph_digest = g.digest();
  p.lambda = lambda;
  p.v = g.v;
  p.edge_count = static_cast<std::uint32_t>(e);
  p.rounds.resize(r_count);

  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<commit::Decommitment>> openings(r_count);
  for (std::uint64_t i = 0; i < r_count; ++i) {
    PreparedRound pr = prepare_round(phi, rng);
    p.rounds[i].commitments = std::move(pr.commitments);
    openings[i] = std::move(pr.openings);
  }
  double commit_s = seconds_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  Digest64 cd = commit_digest(p.graph_digest, lambda, r_count, p.rounds);
  p.ts_token = tsa.stamp(cd);
  auto pulse = bc.pulse_after(p.ts_token.t);
  if (!pulse) throw std::runtime_error("prove: no beacon pulse available after the timestamp");
  p.pulse = *pulse;
  if (parse_rfc3339_utc_ms(p.pulse.timestamp) <= p.ts_token.t)
    throw std::runtime_error("prove: beacon returned a pulse not after the timestamp");

  auto indices = sample_edges(p.pulse.local_random_value, e, r_count);
  for (std::uint64_t i = 0; i < r_count; ++i) {
    std::uint64_t idx = indices[i];
    auto [u, w] = g.edges[idx];
    p.rounds[i].edge_index = idx;
    p.rounds[i].d_j = std::move(openings[i][u]);
    p.rounds[i].d_k = std::move(openings[i][w]);
  }
  double respond_s = seconds_since(t1);

  if (stats) {
    stats->commit_s = commit_s;
    stats->respond_s = respond_s;
    stats->rounds = r_count;
    stats->proof_bytes = p.encode().size();
  }
  return p;
}

bool verify(const Graph& g, const Proof& p, const VerifierKeys& keys,
            std::vector<std::string>* findings) {
  std::vector<std::string> f;
  g.validate();
  std::uint64_t e = g.edges.size();

  if (p.graph_digest != g.digest()) f.push_back("graph digest mismatch");
  if (p.v != g.v || p.edge_count != e) f.push_back("instance shape mismatch");

  std::uint64_t want_rounds = 0;
  if (p.lambda == 0 || e == 0) {
    f.push_back("invalid proof parameters");
  } else {
    want_rounds = round_count(e, p.lambda);
    if (p.rounds.size() != want_rounds) f.push_back("round count mismatch");
  }

  Digest64 cd = commit_digest(p.graph_digest, p.lambda, p.rounds.size(), p.rounds);
  if (cd != p.ts_token.digest)
    f.push_back("timestamp token digest does not bind the commitments");
  if (!tsa::verify_token(p.ts_token, keys.ts))
    f.push_back("timestamp token signature invalid");

  auto pulse_findings = beacon::verify_pulse(p.pulse, nullptr, keys.bc_legacy, keys.bc_pqc);
  for (auto& pf : pulse_findings) f.push_back("pulse: " + pf);

  bool have_pulse_time = true;
  std::uint64_t t_prime = 0;
  try {
    t_prime = parse_rfc3339_utc_ms(p.pulse.timestamp);
  } catch (const std::exception&) {
    have_pulse_time = false;
    f.push_back("pulse timestamp unparsable");
  }
  if (have_pulse_time && t_prime <= p.ts_token.t)
    f.push_back("challenge precedes commitment");

  if (want_rounds != 0 && p.rounds.size() == want_rounds) {
    auto indices = sample_edges(p.pulse.local_random_value, e, want_rounds);
    for (std::uint64_t i = 0; i < want_rounds; ++i)
      check_round(g, p.rounds[i], indices[i], i, f);
  }
  return finish(f, findings);
}

bool interactive_round(const Graph& g, const Coloring& phi, RandomSource& rng) {
  g.validate();
  if (g.edges.empty()) throw std::invalid_argument("interactive_round: graph has no edges");
  if (phi.phi.size() != g.v)
    throw std::invalid_argument("interactive_round: coloring size mismatch");
  for (std::uint8_t col : phi.phi)
    if (col < 1 || col > 3)
      throw std::invalid_argument("interactive_round: colors must lie in {1,2,3}");

  PreparedRound pr = prepare_round(phi, rng);
  std::uint64_t idx = rng.below(g.edges.size());
  auto [u, w] = g.edges[idx];
  if (!commit::open(pr.commitments[u], pr.openings[u])) return false;
  if (!commit::open(pr.commitments[w], pr.openings[w])) return false;
  std::uint8_t cu = pr.openings[u].payload[0];
  std::uint8_t cw = pr.openings[w].payload[0];
  return cu >= 1 && cu <= 3 && cw >= 1 && cw <= 3 && cu != cw;
}

bytes fs_challenge_seed(const Digest64& cd) { return to_vec(sha256(cd)); }

FsProof fiat_shamir_prove(const Graph& g, const Coloring& phi, std::uint32_t lambda,
                          RandomSource& rng, std::uint64_t rounds_override, bool checked) {
  g.validate();
  if (checked && !verify_witness(g, phi))
    throw std::invalid_argument("fiat_shamir_prove: coloring is not a valid witness");
  if (phi.phi.size() != g.v)
    throw std::invalid_argument("fiat_shamir_prove: coloring size mismatch");
  std::uint64_t e = g.edges.size();
  if (e == 0) throw std::invalid_argument("fiat_shamir_prove: graph has no edges");
  std::uint64_t r_count = rounds_override ? rounds_override : round_count(e, lambda);

  FsProof p;
  p.graph_digest = g.digest();
  p.lambda = lambda;
  p.rounds.resize(r_count);
  std::vector<std::vector<commit::Decommitment>> openings(r_count);
  for (std::uint64_t i = 0; i < r_count; ++i) {
    PreparedRound pr = prepare_round(phi, rng);
    p.rounds[i].commitments = std::move(pr.commitments);
    openings[i] = std::move(pr.openings);
  }

  Digest64 cd = commit_digest(p.graph_digest, lambda, r_count, p.rounds);
  auto indices = sample_edges(fs_challenge_seed(cd), e, r_count);
  for (std::uint64_t i = 0; i < r_count; ++i) {
    std::uint64_t idx = indices[i];
    auto [u, w] = g.edges[idx];
    p.rounds[i].edge_index = idx;
    p.rounds[i].d_j = std::move(openings[i][u]);
    p.rounds[i].d_k = std::move(openings[i][w]);
  }
  return p;
}

bool fiat_shamir_verify(const Graph& g, const FsProof& p, std::uint64_t rounds_override,
                        std::vector<std::string>* findings) {
  std::vector<std::string> f;
  g.validate();
  std::uint64_t e = g.edges.size();
  if (p.graph_digest != g.digest()) f.push_back("graph digest mismatch");

  std::uint64_t want_rounds = rounds_override;
  if (want_rounds == 0) {
    if (p.lambda == 0 || e == 0) {
      f.push_back("invalid proof parameters");
    } else {
      want_rounds = round_count(e, p.lambda);
    }
  }
  if (want_rounds != 0 && p.rounds.size() != want_rounds)
    f.push_back("round count mismatch");

  if (want_rounds != 0 && p.rounds.size() == want_rounds) {
    Digest64 cd = commit_digest(p.graph_digest, p.lambda, want_rounds, p.rounds);
    auto indices = sample_edges(fs_challenge_seed(cd), e, want_rounds);
    for (std::uint64_t i = 0; i < want_rounds; ++i)
      check_round(g, p.rounds[i], indices[i], i, f);
  }
  return finish(f, findings);
}

}  // namespace bzk::zkp
