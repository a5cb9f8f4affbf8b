#ifndef UAEC_HASH_HPP
#define UAEC_HASH_HPP

#include <array>
#include <cstdint>
#include <string>

namespace uaec {

// SHA-256 of arbitrary bytes (cache keying, config digests).
std::array<std::uint8_t, 32> sha256(const void* data, std::size_t len);
std::string sha256_hex(const std::string& data);

// FNV-1a 64-bit, the cache trailer checksum.
std::uint64_t fnv1a64(const void* data, std::size_t len);

}  // namespace uaec

#endif  // UAEC_HASH_HPP
