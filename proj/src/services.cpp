// SPDX-License-Identifier: Apache-2.0
#include "bzk/services.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <stdexcept>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace bzk::svc {

namespace {

std::string format_chsh(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", s);
  return buf;
}

void reply_json(httplib::Response& res, const std::string& body, int status = 200) {
  res.status = status;
  res.set_content(body, "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  nlohmann::json j;
  j["error"] = message;
  reply_json(res, j.dump(), status);
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<beacon::Pulse> LocalBeaconClient::pulse_after(std::uint64_t t_ms) {
  for (;;) {
    auto p = store_.first_at_or_after(t_ms + 1);
    if (p) return p;
    if (!advance_ || !advance_()) return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Beacon HTTP surface

class BeaconHttp {
 public:
  BeaconHttp(beacon::ChainStore& store, const beacon::BeaconEngine& engine, std::mutex& mu)
      : store_(store), engine_(engine), mu_(mu) {
    mount();
  }

  int start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
      bound = server_.bind_to_any_port(host);
      if (bound < 0) throw std::runtime_error("beacon http: cannot bind");
    } else if (!server_.bind_to_port(host, port)) {
      throw std::runtime_error("beacon http: cannot bind port " + std::to_string(port));
    }
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  void mount() {
    server_.Get("/info", [this](const httplib::Request&, httplib::Response& res) {
      nlohmann::json j;
      const auto& cfg = engine_.config();
      j["uri_base"] = cfg.uri_base;
      j["version"] = cfg.version;
      j["cipher_suite"] = cfg.cipher_suite;
      j["period_ms"] = cfg.period_ms;
      j["chain_index"] = cfg.chain_index;
      j["certificate_id"] = to_hex(engine_.keys().certificate_id());
      j["pk_legacy"] = to_hex(engine_.keys().legacy.pk.encode());
      j["pk_pqc"] = to_hex(engine_.keys().pqc.pk.encode());
      reply_json(res, j.dump());
    });

    server_.Get(R"(/chain/(\d+)/pulse/(\d+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  serve_by_index(req, res, false);
                });
    server_.Get(R"(/chain/(\d+)/pulse/(\d+)/bin)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  serve_by_index(req, res, true);
                });

    server_.Get("/pulse/last", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lk(mu_);
      auto p = store_.last();
      if (!p) return reply_error(res, 404, "empty chain");
      reply_json(res, p->to_json());
    });

    server_.Get(R"(/pulse/time/(\d+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  auto ms = parse_u64(req.matches[1]);
                  if (!ms) return reply_error(res, 400, "bad time");
                  std::lock_guard lk(mu_);
                  auto p = store_.first_at_or_after(*ms);
                  if (!p) return reply_error(res, 404, "no pulse at or after that time");
                  reply_json(res, p->to_json());
                });
  }

  void serve_by_index(const httplib::Request& req, httplib::Response& res, bool binary) {
    auto chain = parse_u64(req.matches[1]);
    auto index = parse_u64(req.matches[2]);
    if (!chain || !index) return reply_error(res, 400, "bad index");
    std::lock_guard lk(mu_);
    auto p = store_.by_index(*chain, *index);
    if (!p) return reply_error(res, 404, "unknown pulse");
    if (binary) {
      bytes enc = p->encode();
      res.status = 200;
      res.set_content(std::string(enc.begin(), enc.end()), "application/octet-stream");
    } else {
      reply_json(res, p->to_json());
    }
  }

  httplib::Server server_;
  std::thread thread_;
  beacon::ChainStore& store_;
  const beacon::BeaconEngine& engine_;
  std::mutex& mu_;
};

BeaconService::BeaconService(beacon::BeaconEngine& engine, beacon::ChainStore& store,
                             pipeline::EntropyPipeline& pipe, Clock& clock, Options opts)
    : engine_(engine), store_(store), pipe_(pipe), clock_(clock), opts_(std::move(opts)) {}

BeaconService::~BeaconService() { stop(); }

int BeaconService::start() {
  http_ = std::make_unique<BeaconHttp>(store_, engine_, mu_);
  port_ = http_->start(opts_.host, opts_.port);
  if (store_.size() == 0 && !engine_.primed()) {
    auto block = pipe_.next_block();
    if (block) engine_.prime(*block);
  }
  scheduler_ = std::thread([this] { scheduler_loop(); });
  return port_;
}

void BeaconService::emit_once() {
  auto block = pipe_.next_block();
  std::string chsh = format_chsh(pipe_.last_s());
  std::lock_guard lk(mu_);
  std::uint64_t now = clock_.now_ms();
  auto last = store_.last();
  if (last) {
    // keep timestamps strictly increasing even under clock stalls
    std::uint64_t prev = parse_rfc3339_utc_ms(last->timestamp);
    if (now <= prev) now = prev + 1;
  }
  engine_.emit(std::move(block), now, chsh);
}

void BeaconService::scheduler_loop() {
  for (;;) {
    emit_once();
    std::unique_lock lk(stop_mu_);
    stop_cv_.wait_for(lk, std::chrono::milliseconds(opts_.period_ms),
                      [this] { return stopping_; });
    if (stopping_) return;
  }
}

void BeaconService::stop() {
  {
    std::lock_guard lk(stop_mu_);
    if (stopping_ && !scheduler_.joinable() && !http_) return;
    stopping_ = true;
  }
  stop_cv_.notify_all();
  if (scheduler_.joinable()) scheduler_.join();
  if (http_) {
    http_->stop();
    http_.reset();
  }
}

// ---------------------------------------------------------------------------
// Timestamp authority HTTP surface

class TsaHttp {
 public:
  explicit TsaHttp(const tsa::Authority& authority) : authority_(authority) { mount(); }

  int start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
      bound = server_.bind_to_any_port(host);
      if (bound < 0) throw std::runtime_error("tsa http: cannot bind");
    } else if (!server_.bind_to_port(host, port)) {
      throw std::runtime_error("tsa http: cannot bind port " + std::to_string(port));
    }
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return bound;
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  void mount() {
    server_.Post("/timestamp", [this](const httplib::Request& req, httplib::Response& res) {
      Digest64 digest;
      try {
        nlohmann::json j = nlohmann::json::parse(req.body);
        bytes d = from_hex(j.at("digest").get<std::string>());
        if (d.size() != digest.size()) throw std::invalid_argument("digest must be 64 bytes");
        std::copy(d.begin(), d.end(), digest.begin());
      } catch (const std::exception& e) {
        return reply_error(res, 400, e.what());
      }
      OsRandom rng;
      reply_json(res, authority_.stamp(digest, rng).to_json());
    });

    server_.Get("/key", [this](const httplib::Request&, httplib::Response& res) {
      nlohmann::json j;
      j["pk"] = to_hex(authority_.public_key().encode());
      reply_json(res, j.dump());
    });
  }

  httplib::Server server_;
  std::thread thread_;
  const tsa::Authority& authority_;
};

TsaService::TsaService(const tsa::Authority& authority, Options opts)
    : authority_(authority), opts_(std::move(opts)) {}

TsaService::~TsaService() { stop(); }

int TsaService::start() {
  http_ = std::make_unique<TsaHttp>(authority_);
  port_ = http_->start(opts_.host, opts_.port);
  return port_;
}

void TsaService::stop() {
  if (http_) {
    http_->stop();
    http_.reset();
  }
}

// ---------------------------------------------------------------------------
// HTTP clients

tsa::TimestampToken HttpTsaClient::stamp(const Digest64& digest) {
  httplib::Client cli(base_url_);
  nlohmann::json j;
  j["digest"] = to_hex(digest);
  auto res = cli.Post("/timestamp", j.dump(), "application/json");
  if (!res || res->status != 200)
    throw std::runtime_error("tsa client: stamp request failed");
  auto tok = tsa::TimestampToken::from_json(res->body);
  if (!tok) throw std::runtime_error("tsa client: malformed token");
  return *tok;
}

sig::PublicKey HttpTsaClient::fetch_key() {
  httplib::Client cli(base_url_);
  auto res = cli.Get("/key");
  if (!res || res->status != 200) throw std::runtime_error("tsa client: key request failed");
  nlohmann::json j = nlohmann::json::parse(res->body);
  return sig::PublicKey::decode(from_hex(j.at("pk").get<std::string>()));
}

std::optional<beacon::Pulse> HttpBeaconClient::pulse_after(std::uint64_t t_ms) {
  httplib::Client cli(base_url_);
  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(wait_ms_);
  for (;;) {
    auto res = cli.Get("/pulse/time/" + std::to_string(t_ms + 1));
    if (res && res->status == 200) {
      try {
        return beacon::Pulse::from_json(res->body);
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
    if (std::chrono::steady_clock::now() >= deadline) return std::nullopt;
    std::this_thread::sleep_for(std::chrono::milliseconds(poll_ms_));
  }
}

std::optional<beacon::Pulse> HttpBeaconClient::by_index(std::uint64_t chain,
                                                        std::uint64_t index) {
  httplib::Client cli(base_url_);
  auto res = cli.Get("/chain/" + std::to_string(chain) + "/pulse/" + std::to_string(index));
  if (!res || res->status != 200) return std::nullopt;
  try {
    return beacon::Pulse::from_json(res->body);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<beacon::Pulse> HttpBeaconClient::last() {
  httplib::Client cli(base_url_);
  auto res = cli.Get("/pulse/last");
  if (!res || res->status != 200) return std::nullopt;
  try {
    return beacon::Pulse::from_json(res->body);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<bytes> HttpBeaconClient::by_index_bin(std::uint64_t chain, std::uint64_t index) {
  httplib::Client cli(base_url_);
  auto res =
      cli.Get("/chain/" + std::to_string(chain) + "/pulse/" + std::to_string(index) + "/bin");
  if (!res || res->status != 200) return std::nullopt;
  return bytes(res->body.begin(), res->body.end());
}

std::pair<sig::PublicKey, sig::PublicKey> HttpBeaconClient::fetch_keys() {
  httplib::Client cli(base_url_);
  auto res = cli.Get("/info");
  if (!res || res->status != 200)
    throw std::runtime_error("beacon client: info request failed");
  nlohmann::json j = nlohmann::json::parse(res->body);
  return {sig::PublicKey::decode(from_hex(j.at("pk_legacy").get<std::string>())),
          sig::PublicKey::decode(from_hex(j.at("pk_pqc").get<std::string>()))};
}

}  // namespace bzk::svc
