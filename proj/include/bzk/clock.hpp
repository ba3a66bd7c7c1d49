// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace bzk {

// Milliseconds since the Unix epoch, UTC.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::uint64_t now_ms() = 0;
};

class SystemClock final : public Clock {
 public:
  std::uint64_t now_ms() override;
};

// Test clock with explicit control.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(std::uint64_t start_ms = 0) : t_(start_ms) {}
  std::uint64_t now_ms() override { return t_; }
  void set(std::uint64_t ms) { t_ = ms; }
  void advance(std::uint64_t ms) { t_ += ms; }

 private:
  std::uint64_t t_;
};

struct UtcParts {
  int year, month, day, hour, minute, second, millisecond;
};

UtcParts utc_parts(std::uint64_t unix_ms);

// "2026-08-15T12:34:56.789Z"
std::string rfc3339_utc_ms(std::uint64_t unix_ms);
std::uint64_t parse_rfc3339_utc_ms(const std::string& s);

}  // namespace bzk
