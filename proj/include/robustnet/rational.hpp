#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace robustnet {

namespace detail {

using int128 = __int128;

inline int128 abs128(int128 v) { return v < 0 ? -v : v; }

inline int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t narrow64(int128 v, const char* ctx) {
  if (v > int128(std::numeric_limits<std::int64_t>::max()) ||
      v < int128(std::numeric_limits<std::int64_t>::min()))
    throw std::overflow_error(std::string("rational overflow in ") + ctx);
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

// Exact rational with 64-bit numerator/denominator, always normalized
// (gcd 1, denominator > 0). Intermediate products run in 128 bits and
// overflow of the reduced result throws instead of wrapping.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // "p", "-p" or "p/q".
  static Rational parse(const std::string& text) {
    std::size_t slash = text.find('/');
    try {
      if (slash == std::string::npos) return Rational(parse_int(text), 1);
      return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("not a rational literal: '" + text + "'");
    }
  }

  // Exact value of a finite double whose reduced denominator fits 64 bits.
  static Rational from_double_exact(double v) {
    if (!(v == v) || v > 9.2e18 || v < -9.2e18)
      throw std::overflow_error("double not representable as Rational");
    if (v == static_cast<std::int64_t>(v)) return Rational(static_cast<std::int64_t>(v));
    detail::int128 num = 0;
    detail::int128 den = 1;
    double frac = v;
    int steps = 0;
    while (frac != static_cast<double>(static_cast<std::int64_t>(frac))) {
      frac *= 2;
      den *= 2;
      if (++steps > 62) throw std::overflow_error("double too fine-grained for Rational");
    }
    num = static_cast<std::int64_t>(frac);
    detail::int128 g = detail::gcd128(num, den);
    return Rational(detail::narrow64(num / g, "from_double"), detail::narrow64(den / g, "from_double"));
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(detail::int128(a.num_) * b.den_ + detail::int128(b.num_) * a.den_,
                detail::int128(a.den_) * b.den_, "+");
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(detail::int128(a.num_) * b.den_ - detail::int128(b.num_) * a.den_,
                detail::int128(a.den_) * b.den_, "-");
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(detail::int128(a.num_) * b.num_, detail::int128(a.den_) * b.den_, "*");
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make(detail::int128(a.num_) * b.den_, detail::int128(a.den_) * b.num_, "/");
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return detail::int128(a.num_) * b.den_ < detail::int128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  static Rational make(detail::int128 num, detail::int128 den, const char* ctx) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    detail::int128 g = detail::gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    Rational r;
    r.num_ = detail::narrow64(num, ctx);
    r.den_ = detail::narrow64(den, ctx);
    return r;
  }

  void assign(std::int64_t num, std::int64_t den) {
    *this = make(num, den, "ctor");
  }

  static std::int64_t parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer");
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace robustnet
