// SPDX-License-Identifier: Apache-2.0
#include "bzk/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace bzk {

namespace {

void digest_into(const EVP_MD* md, std::span<const std::uint8_t> data, std::uint8_t* out,
                 unsigned expected) {
  unsigned len = 0;
  if (EVP_Digest(data.data(), data.size(), out, &len, md, nullptr) != 1 || len != expected)
    throw std::runtime_error("digest failed");
}

}  // namespace

Digest32 sha256(std::span<const std::uint8_t> data) {
  Digest32 out;
  digest_into(EVP_sha256(), data, out.data(), 32);
  return out;
}

Digest64 sha512(std::span<const std::uint8_t> data) {
  Digest64 out;
  digest_into(EVP_sha512(), data, out.data(), 64);
  return out;
}

Hasher::Hasher(Alg alg) : alg_(alg) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
  if (EVP_DigestInit_ex(ctx, alg == Alg::sha256 ? EVP_sha256() : EVP_sha512(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("EVP_DigestInit_ex failed");
  }
  ctx_ = ctx;
}

Hasher::~Hasher() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Hasher::update(std::span<const std::uint8_t> data) {
  if (EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size()) != 1)
    throw std::runtime_error("EVP_DigestUpdate failed");
}

bytes Hasher::finish() {
  auto* ctx = static_cast<EVP_MD_CTX*>(ctx_);
  unsigned len = 0;
  bytes out(alg_ == Alg::sha256 ? 32 : 64);
  if (EVP_DigestFinal_ex(ctx, out.data(), &len) != 1 || len != out.size())
    throw std::runtime_error("EVP_DigestFinal_ex failed");
  if (EVP_DigestInit_ex(ctx, alg_ == Alg::sha256 ? EVP_sha256() : EVP_sha512(), nullptr) != 1)
    throw std::runtime_error("EVP_DigestInit_ex failed");
  return out;
}

std::string to_hex(std::span<const std::uint8_t> data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 15]);
  }
  return out;
}

bytes from_hex(const std::string& hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("from_hex: bad character");
  };
  if (hex.size() % 2) throw std::invalid_argument("from_hex: odd length");
  bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  return out;
}

}  // namespace bzk
