#ifndef UAEC_DYADIC_HPP
#define UAEC_DYADIC_HPP

#include <cstdint>
#include <string>
#include <utility>

namespace uaec {

// Exact dyadic rational: num / 2^scale with num a 128-bit unsigned integer.
// Every probability this project enumerates is a finite sum of 2^-k terms
// with k bounded by depth caps, so 128 bits of numerator leave two orders
// of magnitude of headroom over the deepest supported configuration.
// Values are kept normalized (odd numerator, or zero with scale 0), which
// makes equality a plain field compare.
class Dyadic {
 public:
  using u128 = unsigned __int128;

  Dyadic() : num_(0), scale_(0) {}

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1, 0); }
  // 2^-k, k >= 0.
  static Dyadic pow2_neg(int k);
  // n / 2^k, exact.
  static Dyadic ratio(std::uint64_t n, int k);

  bool is_zero() const { return num_ == 0; }

  Dyadic operator+(const Dyadic& o) const;
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  // Monus with a hard precondition: *this >= o (throws Errc::domain).
  Dyadic operator-(const Dyadic& o) const;
  Dyadic operator*(const Dyadic& o) const;

  bool operator==(const Dyadic& o) const {
    return num_ == o.num_ && scale_ == o.scale_;
  }
  bool operator!=(const Dyadic& o) const { return !(*this == o); }
  bool operator<(const Dyadic& o) const;
  bool operator<=(const Dyadic& o) const { return *this < o || *this == o; }
  bool operator>(const Dyadic& o) const { return o < *this; }
  bool operator>=(const Dyadic& o) const { return o <= *this; }

  double to_double() const;

  // Reduced fraction (num, den) with den = 2^scale; both must fit 64 bits.
  std::pair<std::uint64_t, std::uint64_t> num_den() const;

  // "num/2^scale" — always printable, no width limits.
  std::string to_string() const;

  int scale() const { return scale_; }

 private:
  Dyadic(u128 num, int scale) : num_(num), scale_(scale) { normalize(); }
  void normalize();

  u128 num_;
  int scale_;
};

}  // namespace uaec

#endif  // UAEC_DYADIC_HPP
