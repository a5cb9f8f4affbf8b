#include "uaec/bits.hpp"

#include "uaec/errors.hpp"

namespace uaec {

bool valid_bits(const Bits& s) {
  for (char c : s)
    if (c != '0' && c != '1') return false;
  return true;
}

void require_bits(const Bits& s, const char* what) {
  if (!valid_bits(s))
    fail(Errc::domain, std::string(what) + " must contain only '0'/'1'");
}

Bits nat_to_bits(std::uint64_t n) {
  if (n < 1) fail(Errc::domain, "natural subject must be >= 1");
  Bits out;
  while (n > 1) {
    out.push_back((n & 1) ? '1' : '0');
    n >>= 1;
  }
  return Bits(out.rbegin(), out.rend());
}

std::uint64_t bits_to_nat(const Bits& s) {
  if (s.size() >= 64) fail(Errc::domain, "bit string too long for a 64-bit index");
  std::uint64_t n = 1;
  for (char c : s) n = (n << 1) | (c == '1' ? 1u : 0u);
  return n;
}

std::vector<std::uint8_t> pack_bits(const Bits& s) {
  std::vector<std::uint8_t> out((s.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == '1') out[i / 8] |= static_cast<std::uint8_t>(1u << (7 - i % 8));
  return out;
}

Bits unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
  Bits out(nbits, '0');
  for (std::size_t i = 0; i < nbits; ++i)
    if (bytes[i / 8] & (1u << (7 - i % 8))) out[i] = '1';
  return out;
}

}  // namespace uaec
