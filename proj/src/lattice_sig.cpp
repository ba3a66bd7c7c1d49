// SPDX-License-Identifier: Apache-2.0
#include "bzk/lattice_sig.hpp"

#include <bit>
#include <stdexcept>

#include "bzk/hash.hpp"

namespace bzk::sig {

namespace {

bool is_prime(std::uint32_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

// One byte per coefficient; highbits values fit since (q-1)/(2*gamma2) <= 255.
bytes pack_highbits(const PolyVec& w1) {
  bytes out;
  out.reserve(w1.size() * kN);
  for (const auto& p : w1)
    for (auto c : p.coeffs) out.push_back(static_cast<std::uint8_t>(c));
  return out;
}

bytes challenge_digest(const PolyVec& w1, std::span<const std::uint8_t> mu) {
  Hasher h(Hasher::Alg::sha512);
  h.update(pack_highbits(w1));
  h.update(mu);
  return h.finish();
}

std::uint32_t z_bits(const SigParams& p) {
  // packed value range [0, 2*(gamma1-beta)-2]
  return std::bit_width(2 * (p.gamma1 - p.beta) - 2);
}

}  // namespace

void SigParams::validate() const {
  if (n != kN || q != kQ)
    throw std::invalid_argument("SigParams: only n=256, q=8380417 supported by the transform");
  if (!is_prime(q) || q % (2 * n) != 1)
    throw std::invalid_argument("SigParams: q must be prime with q = 1 mod 2n");
  if (gamma1 <= beta || gamma2 <= beta)
    throw std::invalid_argument("SigParams: gamma1 and gamma2 must exceed beta");
  if (beta < tau * eta) throw std::invalid_argument("SigParams: beta < tau*eta");
  if (tau == 0 || tau > 64) throw std::invalid_argument("SigParams: tau must be in [1,64]");
  if ((q - 1) % (2 * gamma2) != 0)
    throw std::invalid_argument("SigParams: 2*gamma2 must divide q-1");
  if (k == 0 || l == 0) throw std::invalid_argument("SigParams: zero dimension");
}

std::uint32_t highbits(std::uint32_t r, std::uint32_t alpha) { return r / alpha; }
std::uint32_t lowbits(std::uint32_t r, std::uint32_t alpha) { return r % alpha; }

RingElement highbits(const RingElement& r, std::uint32_t alpha) {
  RingElement out(r.coeffs.size());
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) out.coeffs[i] = r.coeffs[i] / alpha;
  return out;
}

PolyVec highbits(const PolyVec& v, std::uint32_t alpha) {
  PolyVec out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(highbits(p, alpha));
  return out;
}

RingElement sample_in_ball(std::span<const std::uint8_t> digest, const SigParams& params) {
  CounterDrbg stream(bytes(digest.begin(), digest.end()));
  RingElement c(params.n);
  std::uint64_t signs = stream.next_u64();
  for (std::uint32_t i = params.n - params.tau; i < params.n; ++i) {
    std::uint32_t j;
    do {
      std::uint8_t b;
      stream.fill(&b, 1);
      j = b;
    } while (j > i);
    c.coeffs[i] = c.coeffs[j];
    c.coeffs[j] = (signs & 1) ? kQ - 1 : 1;
    signs >>= 1;
  }
  return c;
}

void PublicKey::cache() {
  a_hat = to_ntt(a);
}

void SecretKey::cache() {
  s1_hat = to_ntt(s1);
  s2_hat = to_ntt(s2);
}

SigKeypair keygen(const SigParams& params, RandomSource& rng) {
  params.validate();
  SigKeypair kp;
  kp.pk.params = params;
  kp.pk.a.resize(params.k);
  for (auto& row : kp.pk.a) {
    row.clear();
    for (std::uint32_t j = 0; j < params.l; ++j) row.push_back(uniform_element(rng, params.n));
  }
  auto small_poly = [&] {
    RingElement p(params.n);
    for (auto& c : p.coeffs)
      c = canonical(rng.range(-static_cast<std::int64_t>(params.eta), params.eta));
    return p;
  };
  PolyVec s1, s2;
  for (std::uint32_t j = 0; j < params.l; ++j) s1.push_back(small_poly());
  for (std::uint32_t i = 0; i < params.k; ++i) s2.push_back(small_poly());

  kp.pk.cache();
  PolyVec t = mat_vec_ntt(kp.pk.a_hat, s1);
  for (std::uint32_t i = 0; i < params.k; ++i) t[i] = add(t[i], s2[i]);
  kp.pk.t = std::move(t);

  kp.sk.pk = kp.pk;
  kp.sk.s1 = std::move(s1);
  kp.sk.s2 = std::move(s2);
  kp.sk.cache();
  return kp;
}

Signature sign(const SecretKey& sk, std::span<const std::uint8_t> mu, RandomSource& rng,
               SignTrace* trace) {
  const SigParams& p = sk.pk.params;
  const std::uint32_t alpha = 2 * p.gamma2;
  const std::uint32_t z_bound = p.gamma1 - p.beta;

  for (std::uint32_t attempt = 1; attempt <= kSignIterationCap; ++attempt) {
    PolyVec y;
    y.reserve(p.l);
    for (std::uint32_t j = 0; j < p.l; ++j) {
      RingElement e(p.n);
      const std::int64_t bound = static_cast<std::int64_t>(p.gamma1) - 1;
      for (auto& c : e.coeffs) c = canonical(rng.range(-bound, bound));
      y.push_back(std::move(e));
    }

    PolyVec w = mat_vec_ntt(sk.pk.a_hat, y);
    PolyVec w1 = highbits(w, alpha);
    bytes c_digest = challenge_digest(w1, mu);
    RingElement c_hat = sample_in_ball(c_digest, p);
    ntt(c_hat);

    PolyVec z;
    z.reserve(p.l);
    for (std::uint32_t j = 0; j < p.l; ++j) {
      RingElement cs1 = pointwise(c_hat, sk.s1_hat[j]);
      intt(cs1);
      z.push_back(add(y[j], cs1));
    }
    if (infinity_norm(z) >= z_bound) continue;

    // u = A·y - c·s2; keep every low part inside [beta, 2*gamma2 - beta) so
    // highbits(A·z - c·t) recomputed by the verifier matches highbits(w).
    bool ok = true;
    for (std::uint32_t i = 0; i < p.k && ok; ++i) {
      RingElement cs2 = pointwise(c_hat, sk.s2_hat[i]);
      intt(cs2);
      RingElement u = sub(w[i], cs2);
      for (auto c : u.coeffs) {
        std::uint32_t lo = lowbits(c, alpha);
        if (lo < p.beta || lo >= alpha - p.beta) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;

    if (trace) {
      trace->attempts = attempt;
      trace->w = w;
      trace->w1 = w1;
    }
    return Signature{std::move(z), std::move(c_digest)};
  }
  throw std::runtime_error("sign: rejection loop exceeded iteration cap");
}

bool verify(const PublicKey& pk, const Signature& sig, std::span<const std::uint8_t> mu) {
  const SigParams& p = pk.params;
  if (sig.z.size() != p.l || sig.c.size() != 64) return false;
  for (const auto& e : sig.z) {
    if (e.coeffs.size() != p.n) return false;
    for (auto c : e.coeffs)
      if (c >= p.q) return false;
  }
  if (infinity_norm(sig.z) >= p.gamma1 - p.beta) return false;

  RingElement c_hat = sample_in_ball(sig.c, p);
  ntt(c_hat);
  PolyVec az = mat_vec_ntt(pk.a_hat, sig.z);
  for (std::uint32_t i = 0; i < p.k; ++i) {
    RingElement t_hat = pk.t[i];
    ntt(t_hat);
    RingElement ct = pointwise(c_hat, t_hat);
    intt(ct);
    az[i] = sub(az[i], ct);
  }
  PolyVec w1 = highbits(az, 2 * p.gamma2);
  return challenge_digest(w1, mu) == sig.c;
}

bool verify(const PublicKey& pk, std::span<const std::uint8_t> sig_bytes,
            std::span<const std::uint8_t> mu) {
  auto sig = Signature::decode(sig_bytes, pk.params);
  if (!sig) return false;
  return verify(pk, *sig, mu);
}

namespace {

void append_words(bytes& out, const RingElement& e) {
  for (auto c : e.coeffs) append_le32(out, c);
}

void append_words(bytes& out, const PolyVec& v) {
  for (const auto& e : v) append_words(out, e);
}

bytes params_block(const SigParams& p) {
  bytes out;
  for (std::uint32_t v : {p.n, p.q, p.k, p.l, p.eta, p.gamma1, p.gamma2, p.tau, p.beta})
    append_le32(out, v);
  return out;
}

SigParams read_params(ByteReader& r) {
  SigParams p;
  p.n = r.le32();
  p.q = r.le32();
  p.k = r.le32();
  p.l = r.le32();
  p.eta = r.le32();
  p.gamma1 = r.le32();
  p.gamma2 = r.le32();
  p.tau = r.le32();
  p.beta = r.le32();
  return p;
}

RingElement read_element(ByteReader& r, std::uint32_t n, std::uint32_t q) {
  RingElement e(n);
  for (auto& c : e.coeffs) {
    c = r.le32();
    if (c >= q) throw std::invalid_argument("ring element coefficient out of range");
  }
  return e;
}

void append_section(bytes& out, const bytes& section) {
  append_le32(out, static_cast<std::uint32_t>(section.size()));
  append_bytes(out, section);
}

bytes read_section(ByteReader& r) {
  std::uint32_t len = r.le32();
  return r.take_vec(len);
}

}  // namespace

bytes PublicKey::encode() const {
  bytes out;
  append_section(out, params_block(params));
  bytes a_bytes;
  for (const auto& row : a) append_words(a_bytes, row);
  append_section(out, a_bytes);
  bytes t_bytes;
  append_words(t_bytes, t);
  append_section(out, t_bytes);
  return out;
}

PublicKey PublicKey::decode(std::span<const std::uint8_t> data) {
  ByteReader r(data);
  bytes pb = read_section(r);
  ByteReader pr(pb);
  PublicKey pk;
  pk.params = read_params(pr);
  pk.params.validate();

  bytes ab = read_section(r);
  if (ab.size() != std::size_t{pk.params.k} * pk.params.l * pk.params.n * 4)
    throw std::invalid_argument("PublicKey: bad matrix size");
  ByteReader ar(ab);
  pk.a.resize(pk.params.k);
  for (auto& row : pk.a)
    for (std::uint32_t j = 0; j < pk.params.l; ++j)
      row.push_back(read_element(ar, pk.params.n, pk.params.q));

  bytes tb = read_section(r);
  if (tb.size() != std::size_t{pk.params.k} * pk.params.n * 4)
    throw std::invalid_argument("PublicKey: bad t size");
  ByteReader tr(tb);
  for (std::uint32_t i = 0; i < pk.params.k; ++i)
    pk.t.push_back(read_element(tr, pk.params.n, pk.params.q));

  if (!r.done()) throw std::invalid_argument("PublicKey: trailing bytes");
  pk.cache();
  return pk;
}

bytes SecretKey::encode() const {
  bytes out;
  append_section(out, pk.encode());
  bytes s1b, s2b;
  append_words(s1b, s1);
  append_words(s2b, s2);
  append_section(out, s1b);
  append_section(out, s2b);
  return out;
}

SecretKey SecretKey::decode(std::span<const std::uint8_t> data) {
  ByteReader r(data);
  SecretKey sk;
  bytes pkb = read_section(r);
  sk.pk = PublicKey::decode(pkb);
  const auto& p = sk.pk.params;

  bytes s1b = read_section(r);
  if (s1b.size() != std::size_t{p.l} * p.n * 4)
    throw std::invalid_argument("SecretKey: bad s1 size");
  ByteReader s1r(s1b);
  for (std::uint32_t j = 0; j < p.l; ++j) sk.s1.push_back(read_element(s1r, p.n, p.q));

  bytes s2b = read_section(r);
  if (s2b.size() != std::size_t{p.k} * p.n * 4)
    throw std::invalid_argument("SecretKey: bad s2 size");
  ByteReader s2r(s2b);
  for (std::uint32_t i = 0; i < p.k; ++i) sk.s2.push_back(read_element(s2r, p.n, p.q));

  if (!r.done()) throw std::invalid_argument("SecretKey: trailing bytes");
  sk.cache();
  return sk;
}

bytes Signature::encode(const SigParams& params) const {
  const std::uint32_t bits = z_bits(params);
  const std::uint32_t offset = params.gamma1 - params.beta - 1;
  bytes packed;
  packed.reserve((std::size_t{params.l} * params.n * bits + 7) / 8);
  std::uint64_t acc = 0;
  std::uint32_t nacc = 0;
  for (const auto& e : z)
    for (auto coeff : e.coeffs) {
      std::uint32_t v = static_cast<std::uint32_t>(centered(coeff) + static_cast<std::int32_t>(offset));
      acc |= std::uint64_t{v} << nacc;
      nacc += bits;
      while (nacc >= 8) {
        packed.push_back(static_cast<std::uint8_t>(acc));
        acc >>= 8;
        nacc -= 8;
      }
    }
  if (nacc) packed.push_back(static_cast<std::uint8_t>(acc));

  bytes out;
  append_section(out, packed);
  append_section(out, c);
  return out;
}

std::optional<Signature> Signature::decode(std::span<const std::uint8_t> data,
                                           const SigParams& params) {
  try {
    ByteReader r(data);
    bytes packed = read_section(r);
    bytes cdig = read_section(r);
    if (!r.done() || cdig.size() != 64) return std::nullopt;

    const std::uint32_t bits = z_bits(params);
    const std::uint32_t offset = params.gamma1 - params.beta - 1;
    const std::uint32_t vmax = 2 * (params.gamma1 - params.beta) - 2;
    const std::size_t count = std::size_t{params.l} * params.n;
    if (packed.size() != (count * bits + 7) / 8) return std::nullopt;

    Signature sig;
    sig.c = std::move(cdig);
    std::uint64_t acc = 0;
    std::uint32_t nacc = 0;
    std::size_t pos = 0;
    for (std::uint32_t j = 0; j < params.l; ++j) {
      RingElement e(params.n);
      for (auto& coeff : e.coeffs) {
        while (nacc < bits) {
          acc |= std::uint64_t{packed[pos++]} << nacc;
          nacc += 8;
        }
        std::uint32_t v = static_cast<std::uint32_t>(acc & ((std::uint64_t{1} << bits) - 1));
        acc >>= bits;
        nacc -= bits;
        if (v > vmax) return std::nullopt;
        coeff = canonical(static_cast<std::int64_t>(v) - offset);
      }
      sig.z.push_back(std::move(e));
    }
    if (acc != 0) return std::nullopt;  // padding bits must be clear
    return sig;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace bzk::sig
