#ifndef UAEC_BITS_HPP
#define UAEC_BITS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace uaec {

// Bit strings are ASCII strings of '0'/'1'. At desk scale (a few thousand
// bits at most) this keeps configs, caches and debugging trivially readable.
using Bits = std::string;

bool valid_bits(const Bits& s);

// Throws Errc::domain unless s is all '0'/'1'. `what` names the argument.
void require_bits(const Bits& s, const char* what);

// Bijective binary indexing of positive integers:
// 1 <-> "", 2 <-> "0", 3 <-> "1", 4 <-> "00", 5 <-> "01", ...
// (binary expansion of n with the leading 1 removed).
Bits nat_to_bits(std::uint64_t n);
std::uint64_t bits_to_nat(const Bits& s);

// MSB-first packing used by the cache format: bit i of the string lands in
// byte i/8 at bit position 7-(i%8); the last byte is zero padded.
std::vector<std::uint8_t> pack_bits(const Bits& s);
Bits unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t nbits);

}  // namespace uaec

#endif  // UAEC_BITS_HPP
