// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "bzk/beacon.hpp"
#include "bzk/clock.hpp"
#include "bzk/pipeline.hpp"
#include "bzk/timestamp.hpp"
#include "bzk/zkp3col.hpp"

namespace bzk::svc {

// In-process clients, used by tests and by the CLI in --local mode.

class LocalTsaClient final : public zkp::TsaClient {
 public:
  LocalTsaClient(const tsa::Authority& authority, RandomSource& rng)
      : authority_(authority), rng_(rng) {}

  tsa::TimestampToken stamp(const Digest64& digest) override {
    return authority_.stamp(digest, rng_);
  }

 private:
  const tsa::Authority& authority_;
  RandomSource& rng_;
};

class LocalBeaconClient final : public zkp::BeaconClient {
 public:
  // advance() must make progress toward a newer pulse (emit one) and return
  // false when it cannot; absent, only already-stored pulses are served.
  explicit LocalBeaconClient(const beacon::ChainStore& store,
                             std::function<bool()> advance = {})
      : store_(store), advance_(std::move(advance)) {}

  std::optional<beacon::Pulse> pulse_after(std::uint64_t t_ms) override;

 private:
  const beacon::ChainStore& store_;
  std::function<bool()> advance_;
};

// Live beacon: one emitting loop plus a read-only HTTP view over the store.
class BeaconService {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 0;  // 0 picks a free port
    std::uint64_t period_ms = 60000;
  };

  BeaconService(beacon::BeaconEngine& engine, beacon::ChainStore& store,
                pipeline::EntropyPipeline& pipe, Clock& clock, Options opts);
  ~BeaconService();

  // Starts the HTTP listener and the pulse scheduler; returns the bound port.
  int start();
  void stop();

  int port() const { return port_; }

 private:
  void mount_routes();
  void scheduler_loop();
  void emit_once();

  beacon::BeaconEngine& engine_;
  beacon::ChainStore& store_;
  pipeline::EntropyPipeline& pipe_;
  Clock& clock_;
  Options opts_;

  std::mutex mu_;  // guards store_ and engine_
  std::unique_ptr<class BeaconHttp> http_;
  std::thread scheduler_;
  std::mutex stop_mu_;
  std::condition_variable stop_cv_;
  bool stopping_ = false;
  int port_ = 0;
};

class TsaService {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 0;
  };

  TsaService(const tsa::Authority& authority, Options opts);
  ~TsaService();

  int start();
  void stop();
  int port() const { return port_; }

 private:
  const tsa::Authority& authority_;
  Options opts_;
  std::unique_ptr<class TsaHttp> http_;
  int port_ = 0;
};

// HTTP clients speaking the services' JSON surface.

class HttpTsaClient final : public zkp::TsaClient {
 public:
  explicit HttpTsaClient(std::string base_url) : base_url_(std::move(base_url)) {}

  tsa::TimestampToken stamp(const Digest64& digest) override;
  sig::PublicKey fetch_key();

 private:
  std::string base_url_;
};

class HttpBeaconClient final : public zkp::BeaconClient {
 public:
  // wait_ms: total budget for a pulse after t to appear; poll_ms between tries.
  HttpBeaconClient(std::string base_url, std::uint64_t wait_ms = 120000,
                   std::uint64_t poll_ms = 25)
      : base_url_(std::move(base_url)), wait_ms_(wait_ms), poll_ms_(poll_ms) {}

  std::optional<beacon::Pulse> pulse_after(std::uint64_t t_ms) override;

  std::optional<beacon::Pulse> by_index(std::uint64_t chain, std::uint64_t index);
  std::optional<beacon::Pulse> last();
  std::optional<bytes> by_index_bin(std::uint64_t chain, std::uint64_t index);
  // {legacy, pqc} beacon verification keys from /info
  std::pair<sig::PublicKey, sig::PublicKey> fetch_keys();

 private:
  std::string base_url_;
  std::uint64_t wait_ms_, poll_ms_;
};

}  // namespace bzk::svc
