// SPDX-License-Identifier: Apache-2.0
#include "bzk/clock.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace bzk {

std::uint64_t SystemClock::now_ms() {
  using namespace std::chrono;
  return static_cast<std::uint64_t>(
      duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count());
}

UtcParts utc_parts(std::uint64_t unix_ms) {
  std::time_t secs = static_cast<std::time_t>(unix_ms / 1000);
  std::tm tm{};
  if (!gmtime_r(&secs, &tm)) throw std::runtime_error("gmtime_r failed");
  return UtcParts{tm.tm_year + 1900, tm.tm_mon + 1,  tm.tm_mday,
                  tm.tm_hour,        tm.tm_min,      tm.tm_sec,
                  static_cast<int>(unix_ms % 1000)};
}

std::string rfc3339_utc_ms(std::uint64_t unix_ms) {
  UtcParts p = utc_parts(unix_ms);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", p.year, p.month,
                p.day, p.hour, p.minute, p.second, p.millisecond);
  return buf;
}

std::uint64_t parse_rfc3339_utc_ms(const std::string& s) {
  std::tm tm{};
  int ms = 0;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3dZ%n", &tm.tm_year, &tm.tm_mon,
                  &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &ms, &consumed) != 7 ||
      consumed == 0 || static_cast<std::size_t>(consumed) != s.size())
    throw std::invalid_argument("bad RFC-3339 timestamp: " + s);
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  std::time_t secs = timegm(&tm);
  if (secs < 0) throw std::invalid_argument("timestamp before epoch: " + s);
  std::uint64_t out = static_cast<std::uint64_t>(secs) * 1000 + static_cast<std::uint64_t>(ms);
  // only canonical spellings are accepted (timegm would normalize 2023-13-01)
  if (rfc3339_utc_ms(out) != s) throw std::invalid_argument("bad RFC-3339 timestamp: " + s);
  return out;
}

}  // namespace bzk
