// SPDX-License-Identifier: Apache-2.0
#include "bzk/beacon.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bzk::beacon {

namespace {

void put_field(bytes& out, std::span<const std::uint8_t> content) {
  append_be32(out, static_cast<std::uint32_t>(content.size()));
  append_bytes(out, content);
}

void put_field(bytes& out, const std::string& s) {
  put_field(out, std::span<const std::uint8_t>(
                     reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

void put_field(bytes& out, std::uint64_t v) {
  append_be32(out, 8);
  append_be64(out, v);
}

bytes read_field_bytes(ByteReader& r) {
  std::uint32_t len = r.be32();
  return r.take_vec(len);
}

std::string read_field_string(ByteReader& r) {
  bytes b = read_field_bytes(r);
  return std::string(b.begin(), b.end());
}

std::uint64_t read_field_u64(ByteReader& r) {
  std::uint32_t len = r.be32();
  if (len != 8) throw std::invalid_argument("pulse field: uint64 must be 8 bytes");
  return r.be64();
}

void require_hash(const bytes& b, const char* what) {
  if (b.size() != kHashLen)
    throw std::invalid_argument(std::string("pulse field ") + what + ": expected 64 bytes");
}

}  // namespace

bytes Pulse::encode_f1_f22() const {
  bytes out;
  put_field(out, uri);
  put_field(out, version);
  put_field(out, cipher_suite);
  put_field(out, period_ms);
  put_field(out, certificate_id);
  put_field(out, chain_index);
  put_field(out, pulse_index);
  put_field(out, timestamp);
  put_field(out, local_random_value);
  put_field(out, external_source_id);
  put_field(out, external_status_code);
  put_field(out, external_value);
  put_field(out, previous);
  put_field(out, hour);
  put_field(out, day);
  put_field(out, month);
  put_field(out, year);
  put_field(out, precommitment_value);
  put_field(out, status_code);
  put_field(out, type);
  put_field(out, chsh);
  put_field(out, method);
  return out;
}

bytes Pulse::encode_f1_f24() const {
  bytes out = encode_f1_f22();
  put_field(out, signature_rsa);
  put_field(out, signature_pqc);
  return out;
}

bytes Pulse::encode() const {
  bytes out = encode_f1_f24();
  put_field(out, output_value);
  return out;
}

Pulse Pulse::decode(std::span<const std::uint8_t> data) {
  ByteReader r(data);
  Pulse p;
  p.uri = read_field_string(r);
  p.version = read_field_string(r);
  p.cipher_suite = read_field_u64(r);
  p.period_ms = read_field_u64(r);
  p.certificate_id = read_field_bytes(r);
  p.chain_index = read_field_u64(r);
  p.pulse_index = read_field_u64(r);
  p.timestamp = read_field_string(r);
  p.local_random_value = read_field_bytes(r);
  p.external_source_id = read_field_bytes(r);
  p.external_status_code = read_field_u64(r);
  p.external_value = read_field_bytes(r);
  p.previous = read_field_bytes(r);
  p.hour = read_field_bytes(r);
  p.day = read_field_bytes(r);
  p.month = read_field_bytes(r);
  p.year = read_field_bytes(r);
  p.precommitment_value = read_field_bytes(r);
  p.status_code = read_field_u64(r);
  p.type = read_field_string(r);
  p.chsh = read_field_string(r);
  p.method = read_field_string(r);
  p.signature_rsa = read_field_bytes(r);
  p.signature_pqc = read_field_bytes(r);
  p.output_value = read_field_bytes(r);
  if (!r.done()) throw std::invalid_argument("pulse: trailing bytes");
  for (auto [b, name] : {std::pair<const bytes*, const char*>{&p.certificate_id, "certificate_id"},
                         {&p.local_random_value, "local_random_value"},
                         {&p.external_source_id, "external_source_id"},
                         {&p.external_value, "external_value"},
                         {&p.previous, "previous"},
                         {&p.hour, "hour"},
                         {&p.day, "day"},
                         {&p.month, "month"},
                         {&p.year, "year"},
                         {&p.precommitment_value, "precommitment_value"},
                         {&p.output_value, "output_value"}})
    require_hash(*b, name);
  return p;
}

Digest64 Pulse::signing_digest() const { return sha512(encode_f1_f22()); }

Digest64 Pulse::compute_output() const { return sha512(encode_f1_f24()); }

std::string Pulse::to_json() const {
  nlohmann::json j;
  j["uri"] = uri;
  j["version"] = version;
  j["cipher_suite"] = cipher_suite;
  j["period_ms"] = period_ms;
  j["certificate_id"] = to_hex(certificate_id);
  j["chain_index"] = chain_index;
  j["pulse_index"] = pulse_index;
  j["timestamp"] = timestamp;
  j["local_random_value"] = to_hex(local_random_value);
  j["external_source_id"] = to_hex(external_source_id);
  j["external_status_code"] = external_status_code;
  j["external_value"] = to_hex(external_value);
  j["previous"] = to_hex(previous);
  j["hour"] = to_hex(hour);
  j["day"] = to_hex(day);
  j["month"] = to_hex(month);
  j["year"] = to_hex(year);
  j["precommitment_value"] = to_hex(precommitment_value);
  j["status_code"] = status_code;
  j["type"] = type;
  j["chsh"] = chsh;
  j["method"] = method;
  j["signature_rsa"] = to_hex(signature_rsa);
  j["signature_pqc"] = to_hex(signature_pqc);
  j["output_value"] = to_hex(output_value);
  return j.dump();
}

Pulse Pulse::from_json(const std::string& s) {
  nlohmann::json j = nlohmann::json::parse(s);
  Pulse p;
  p.uri = j.at("uri").get<std::string>();
  p.version = j.at("version").get<std::string>();
  p.cipher_suite = j.at("cipher_suite").get<std::uint64_t>();
  p.period_ms = j.at("period_ms").get<std::uint64_t>();
  p.certificate_id = from_hex(j.at("certificate_id").get<std::string>());
  p.chain_index = j.at("chain_index").get<std::uint64_t>();
  p.pulse_index = j.at("pulse_index").get<std::uint64_t>();
  p.timestamp = j.at("timestamp").get<std::string>();
  p.local_random_value = from_hex(j.at("local_random_value").get<std::string>());
  p.external_source_id = from_hex(j.at("external_source_id").get<std::string>());
  p.external_status_code = j.at("external_status_code").get<std::uint64_t>();
  p.external_value = from_hex(j.at("external_value").get<std::string>());
  p.previous = from_hex(j.at("previous").get<std::string>());
  p.hour = from_hex(j.at("hour").get<std::string>());
  p.day = from_hex(j.at("day").get<std::string>());
  p.month = from_hex(j.at("month").get<std::string>());
  p.year = from_hex(j.at("year").get<std::string>());
  p.precommitment_value = from_hex(j.at("precommitment_value").get<std::string>());
  p.status_code = j.at("status_code").get<std::uint64_t>();
  p.type = j.at("type").get<std::string>();
  p.chsh = j.at("chsh").get<std::string>();
  p.method = j.at("method").get<std::string>();
  p.signature_rsa = from_hex(j.at("signature_rsa").get<std::string>());
  p.signature_pqc = from_hex(j.at("signature_pqc").get<std::string>());
  p.output_value = from_hex(j.at("output_value").get<std::string>());
  return p;
}

bytes BeaconKeys::certificate_id() const {
  bytes material = legacy.pk.encode();
  append_bytes(material, pqc.pk.encode());
  return to_vec(sha512(material));
}

ChainStore::ChainStore(std::string path) : path_(std::move(path)) { load(); }

void ChainStore::load() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // fresh store
  bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ByteReader r(data);
  while (!r.done()) {
    std::uint32_t len = r.be32();
    auto rec = r.take(len);
    pulses_.push_back(Pulse::decode(rec));
  }
}

void ChainStore::append(const Pulse& p) {
  if (!pulses_.empty()) {
    const Pulse& last = pulses_.back();
    if (p.chain_index != last.chain_index)
      throw std::invalid_argument("ChainStore: chain index mismatch");
    if (p.pulse_index != last.pulse_index + 1)
      throw std::invalid_argument("ChainStore: pulse index must increase by 1");
  }
  bytes rec = p.encode();
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("ChainStore: cannot open " + path_);
  std::uint8_t lenbuf[4];
  store_be32(lenbuf, static_cast<std::uint32_t>(rec.size()));
  out.write(reinterpret_cast<const char*>(lenbuf), 4);
  out.write(reinterpret_cast<const char*>(rec.data()), static_cast<std::streamsize>(rec.size()));
  out.flush();
  if (!out) throw std::runtime_error("ChainStore: write failed");
  pulses_.push_back(p);
}

std::optional<Pulse> ChainStore::by_index(std::uint64_t chain, std::uint64_t pulse_index) const {
  if (pulses_.empty() || chain != pulses_.front().chain_index) return std::nullopt;
  std::uint64_t first = pulses_.front().pulse_index;
  if (pulse_index < first || pulse_index >= first + pulses_.size()) return std::nullopt;
  return pulses_[pulse_index - first];
}

std::optional<Pulse> ChainStore::last() const {
  if (pulses_.empty()) return std::nullopt;
  return pulses_.back();
}

std::optional<Pulse> ChainStore::first_at_or_after(std::uint64_t unix_ms) const {
  // timestamps are appended in increasing order, so binary search applies
  std::size_t lo = 0, hi = pulses_.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (parse_rfc3339_utc_ms(pulses_[mid].timestamp) < unix_ms)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo == pulses_.size()) return std::nullopt;
  return pulses_[lo];
}

std::optional<bytes> ChainStore::first_output_with_prefix(const std::string& prefix) const {
  for (const auto& p : pulses_)
    if (p.timestamp.compare(0, prefix.size(), prefix) == 0) return p.output_value;
  return std::nullopt;
}

BeaconEngine::BeaconEngine(EngineConfig cfg, BeaconKeys keys, ChainStore& store,
                           std::string state_path)
    : cfg_(std::move(cfg)), keys_(std::move(keys)), store_(store),
      state_path_(std::move(state_path)) {
  load_pending();
}

BeaconEngine::Pending BeaconEngine::make_pending(const std::optional<bytes>& block) const {
  if (block) {
    if (block->size() != 64)
      throw std::invalid_argument("BeaconEngine: fresh block must be 64 bytes (512 bits)");
    return Pending{to_vec(sha512(*block)), true};
  }
  return Pending{bytes(kHashLen, 0), false};
}

void BeaconEngine::persist_pending() const {
  nlohmann::json j;
  j["lrv"] = to_hex(pending_->lrv);
  j["fresh"] = pending_->fresh;
  std::string tmp = state_path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << j.dump();
    if (!out) throw std::runtime_error("BeaconEngine: cannot write state file");
  }
  std::filesystem::rename(tmp, state_path_);
}

void BeaconEngine::load_pending() {
  std::ifstream in(state_path_, std::ios::binary);
  if (!in) return;
  nlohmann::json j = nlohmann::json::parse(in);
  pending_ = Pending{from_hex(j.at("lrv").get<std::string>()), j.at("fresh").get<bool>()};
}

void BeaconEngine::prime(const bytes& fresh_block) {
  if (store_.size() != 0 || pending_)
    throw std::logic_error("BeaconEngine: prime is only legal on a fresh chain");
  pending_ = make_pending(fresh_block);
  persist_pending();
}

Pulse BeaconEngine::emit(std::optional<bytes> fresh_block, std::uint64_t now_ms,
                         const std::string& chsh) {
  // The value released now was fixed (and precommitted) one period ago; the
  // block arriving now is committed for the next pulse.
  Pending current = pending_ ? *pending_ : Pending{bytes(kHashLen, 0), false};
  pending_ = make_pending(fresh_block);

  auto prev = store_.last();
  Pulse p;
  p.version = cfg_.version;
  p.cipher_suite = cfg_.cipher_suite;
  p.period_ms = cfg_.period_ms;
  p.certificate_id = keys_.certificate_id();
  p.chain_index = cfg_.chain_index;
  p.pulse_index = prev ? prev->pulse_index + 1 : 1;
  p.uri = cfg_.uri_base + "/chain/" + std::to_string(p.chain_index) + "/pulse/" +
          std::to_string(p.pulse_index);
  p.timestamp = rfc3339_utc_ms(now_ms);
  p.local_random_value = current.lrv;
  p.external_source_id = to_vec(sha512(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(cfg_.external_source_descriptor.data()),
      cfg_.external_source_descriptor.size())));
  p.external_status_code = 0;
  p.external_value = bytes(kHashLen, 0);
  if (prev) {
    p.previous = prev->output_value;
    const std::string& ts = prev->timestamp;
    p.hour = store_.first_output_with_prefix(ts.substr(0, 13)).value();
    p.day = store_.first_output_with_prefix(ts.substr(0, 10)).value();
    p.month = store_.first_output_with_prefix(ts.substr(0, 7)).value();
    p.year = store_.first_output_with_prefix(ts.substr(0, 4)).value();
  } else {
    p.previous = bytes(kHashLen, 0);
    p.hour = bytes(kHashLen, 0);
    p.day = bytes(kHashLen, 0);
    p.month = bytes(kHashLen, 0);
    p.year = bytes(kHashLen, 0);
  }
  p.precommitment_value = to_vec(sha512(pending_->lrv));
  p.status_code = current.fresh ? 0 : 1;
  p.type = "DIQRNG";
  p.chsh = chsh;
  p.method = "QPE";

  Digest64 digest = p.signing_digest();
  OsRandom rng;
  p.signature_rsa = sig::sign(keys_.legacy.sk, digest, rng).encode(keys_.legacy.pk.params);
  p.signature_pqc = sig::sign(keys_.pqc.sk, digest, rng).encode(keys_.pqc.pk.params);
  p.output_value = to_vec(p.compute_output());

  store_.append(p);
  persist_pending();
  return p;
}

std::vector<std::string> verify_pulse(const Pulse& p, const Pulse* prev,
                                      const sig::PublicKey& pk_legacy,
                                      const sig::PublicKey& pk_pqc) {
  std::vector<std::string> findings;
  auto idx = std::to_string(p.pulse_index);
  for (auto [b, name] : {std::pair<const bytes*, const char*>{&p.certificate_id, "certificate_id"},
                         {&p.local_random_value, "local_random_value"},
                         {&p.external_source_id, "external_source_id"},
                         {&p.external_value, "external_value"},
                         {&p.previous, "previous"},
                         {&p.hour, "hour"},
                         {&p.day, "day"},
                         {&p.month, "month"},
                         {&p.year, "year"},
                         {&p.precommitment_value, "precommitment_value"},
                         {&p.output_value, "output_value"}})
    if (b->size() != kHashLen)
      findings.push_back("pulse " + idx + ": field " + name + " is not 64 bytes");
  if (!findings.empty()) return findings;

  if (p.output_value != to_vec(p.compute_output()))
    findings.push_back("pulse " + idx + ": output_value does not match recomputation");

  Digest64 digest = p.signing_digest();
  if (!sig::verify(pk_pqc, std::span<const std::uint8_t>(p.signature_pqc), digest))
    findings.push_back("pulse " + idx + ": PQC signature invalid");
  if (!sig::verify(pk_legacy, std::span<const std::uint8_t>(p.signature_rsa), digest))
    findings.push_back("pulse " + idx + ": classical-slot signature invalid");

  if (prev) {
    if (p.chain_index != prev->chain_index)
      findings.push_back("pulse " + idx + ": chain index differs from predecessor");
    if (p.pulse_index != prev->pulse_index + 1)
      findings.push_back("pulse " + idx + ": pulse index not monotone");
    if (p.previous != prev->output_value)
      findings.push_back("pulse " + idx + ": previous link does not match predecessor output");
    if (parse_rfc3339_utc_ms(p.timestamp) <= parse_rfc3339_utc_ms(prev->timestamp))
      findings.push_back("pulse " + idx + ": timestamp not strictly increasing");
    if (prev->precommitment_value != to_vec(sha512(p.local_random_value)))
      findings.push_back("pulse " + idx +
                         ": predecessor precommitment does not match local_random_value");
  }
  return findings;
}

std::vector<std::string> audit_chain(const ChainStore& store, const sig::PublicKey& pk_legacy,
                                     const sig::PublicKey& pk_pqc) {
  std::vector<std::string> findings;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const Pulse& p = store.at(i);
    const Pulse* prev = i ? &store.at(i - 1) : nullptr;
    auto f = verify_pulse(p, prev, pk_legacy, pk_pqc);
    findings.insert(findings.end(), f.begin(), f.end());

    auto idx = std::to_string(p.pulse_index);
    if (prev) {
      const std::string& ts = prev->timestamp;
      auto check_anchor = [&](const bytes& got, std::size_t prefix_len, const char* name) {
        auto expect = store.first_output_with_prefix(ts.substr(0, prefix_len));
        if (!expect || got != *expect)
          findings.push_back("pulse " + idx + ": " + name + " anchor mismatch");
      };
      check_anchor(p.hour, 13, "hour");
      check_anchor(p.day, 10, "day");
      check_anchor(p.month, 7, "month");
      check_anchor(p.year, 4, "year");
    } else {
      for (auto [b, name] : {std::pair<const bytes*, const char*>{&p.previous, "previous"},
                             {&p.hour, "hour"},
                             {&p.day, "day"},
                             {&p.month, "month"},
                             {&p.year, "year"}})
        if (*b != bytes(kHashLen, 0))
          findings.push_back("pulse " + idx + ": genesis " + name + " link must be zero");
    }
  }
  return findings;
}

}  // namespace bzk::beacon
