#include "uaec/dyadic.hpp"

#include <cmath>

#include "uaec/errors.hpp"

namespace uaec {

namespace {

constexpr int kMaxScale = 120;

int bit_width_u128(Dyadic::u128 v) {
  int w = 0;
  while (v) {
    v >>= 1;
    ++w;
  }
  return w;
}

}  // namespace

void Dyadic::normalize() {
  if (num_ == 0) {
    scale_ = 0;
    return;
  }
  while ((num_ & 1) == 0 && scale_ > 0) {
    num_ >>= 1;
    --scale_;
  }
}

Dyadic Dyadic::pow2_neg(int k) {
  if (k < 0 || k > kMaxScale) fail(Errc::domain, "pow2_neg exponent out of range");
  return Dyadic(1, k);
}

Dyadic Dyadic::ratio(std::uint64_t n, int k) {
  if (k < 0 || k > kMaxScale) fail(Errc::domain, "dyadic scale out of range");
  return Dyadic(n, k);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  int s = scale_ > o.scale_ ? scale_ : o.scale_;
  int da = s - scale_;
  int db = s - o.scale_;
  if (bit_width_u128(num_) + da > 126 || bit_width_u128(o.num_) + db > 126)
    fail(Errc::domain, "dyadic addition overflow");
  return Dyadic((num_ << da) + (o.num_ << db), s);
}

Dyadic Dyadic::operator-(const Dyadic& o) const {
  int s = scale_ > o.scale_ ? scale_ : o.scale_;
  int da = s - scale_;
  int db = s - o.scale_;
  if (bit_width_u128(num_) + da > 126 || bit_width_u128(o.num_) + db > 126)
    fail(Errc::domain, "dyadic subtraction overflow");
  u128 a = num_ << da;
  u128 b = o.num_ << db;
  if (a < b) fail(Errc::domain, "dyadic subtraction would go negative");
  return Dyadic(a - b, s);
}

Dyadic Dyadic::operator*(const Dyadic& o) const {
  if (num_ == 0 || o.num_ == 0) return Dyadic();
  if (bit_width_u128(num_) + bit_width_u128(o.num_) > 126 ||
      scale_ + o.scale_ > kMaxScale)
    fail(Errc::domain, "dyadic multiplication overflow");
  return Dyadic(num_ * o.num_, scale_ + o.scale_);
}

bool Dyadic::operator<(const Dyadic& o) const {
  int s = scale_ > o.scale_ ? scale_ : o.scale_;
  // Same overflow envelope as addition.
  return (num_ << (s - scale_)) < (o.num_ << (s - o.scale_));
}

double Dyadic::to_double() const {
  double hi = static_cast<double>(static_cast<std::uint64_t>(num_ >> 64));
  double lo = static_cast<double>(static_cast<std::uint64_t>(num_));
  return std::ldexp(hi, 64 - scale_) + std::ldexp(lo, -scale_);
}

std::pair<std::uint64_t, std::uint64_t> Dyadic::num_den() const {
  if (scale_ > 62 || (num_ >> 64) != 0)
    fail(Errc::domain, "dyadic does not fit a 64-bit fraction: " + to_string());
  return {static_cast<std::uint64_t>(num_), std::uint64_t{1} << scale_};
}

std::string Dyadic::to_string() const {
  u128 v = num_;
  std::string digits;
  if (v == 0) digits = "0";
  while (v) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::string out(digits.rbegin(), digits.rend());
  out += "/2^" + std::to_string(scale_);
  return out;
}

}  // namespace uaec
