// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bzk {

using bytes = std::vector<std::uint8_t>;

std::string to_hex(std::span<const std::uint8_t> data);
bytes from_hex(const std::string& hex);

inline void store_be32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 24);
  p[1] = static_cast<std::uint8_t>(v >> 16);
  p[2] = static_cast<std::uint8_t>(v >> 8);
  p[3] = static_cast<std::uint8_t>(v);
}

inline std::uint32_t load_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

inline void store_be64(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
}

inline std::uint64_t load_be64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
  return v;
}

inline void store_le32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

inline std::uint32_t load_le32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) |
         (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
}

inline void append_bytes(bytes& out, std::span<const std::uint8_t> data) {
  out.insert(out.end(), data.begin(), data.end());
}

inline void append_be32(bytes& out, std::uint32_t v) {
  std::uint8_t buf[4];
  store_be32(buf, v);
  out.insert(out.end(), buf, buf + 4);
}

inline void append_be64(bytes& out, std::uint64_t v) {
  std::uint8_t buf[8];
  store_be64(buf, v);
  out.insert(out.end(), buf, buf + 8);
}

inline void append_le32(bytes& out, std::uint32_t v) {
  std::uint8_t buf[4];
  store_le32(buf, v);
  out.insert(out.end(), buf, buf + 4);
}

// Sequential reader over a byte buffer; throws std::out_of_range past the end.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (remaining() < n) throw std::out_of_range("ByteReader: truncated input");
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  bytes take_vec(std::size_t n) {
    auto s = take(n);
    return bytes(s.begin(), s.end());
  }

  std::uint32_t be32() { return load_be32(take(4).data()); }
  std::uint64_t be64() { return load_be64(take(8).data()); }
  std::uint32_t le32() { return load_le32(take(4).data()); }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

// Packed bit vector, bit i lives at byte i/8, position i%8 (LSB first).
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::uint64_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::uint64_t size() const { return nbits_; }

  bool get(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(std::uint64_t i, bool v) {
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  bytes to_bytes() const {
    bytes out((nbits_ + 7) / 8);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = static_cast<std::uint8_t>(words_[i >> 3] >> (8 * (i & 7)));
    return out;
  }

  static BitVec from_bytes(std::span<const std::uint8_t> data, std::uint64_t nbits) {
    if (data.size() * 8 < nbits) throw std::invalid_argument("BitVec: not enough bytes");
    BitVec v(nbits);
    for (std::uint64_t i = 0; i < (nbits + 7) / 8; ++i)
      v.words_[i >> 3] |= std::uint64_t{data[i]} << (8 * (i & 7));
    // clear any tail bits beyond nbits
    if (nbits % 64) v.words_.back() &= (~std::uint64_t{0}) >> (64 - nbits % 64);
    return v;
  }

  bool operator==(const BitVec& o) const = default;

 private:
  std::uint64_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace bzk
