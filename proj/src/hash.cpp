#include "uaec/hash.hpp"

#include <openssl/evp.h>

#include "uaec/errors.hpp"

namespace uaec {

std::array<std::uint8_t, 32> sha256(const void* data, std::size_t len) {
  std::array<std::uint8_t, 32> out{};
  unsigned int out_len = 0;
  if (EVP_Digest(data, len, out.data(), &out_len, EVP_sha256(), nullptr) != 1 ||
      out_len != 32)
    fail(Errc::io, "SHA-256 digest failed");
  return out;
}

std::string sha256_hex(const std::string& data) {
  static const char* hexdig = "0123456789abcdef";
  auto digest = sha256(data.data(), data.size());
  std::string out;
  out.reserve(64);
  for (std::uint8_t b : digest) {
    out.push_back(hexdig[b >> 4]);
    out.push_back(hexdig[b & 0xf]);
  }
  return out;
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace uaec
