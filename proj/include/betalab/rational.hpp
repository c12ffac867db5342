// rational.hpp -- exact rationals, directed rounding, and rational interval
// arithmetic. Every numeric decision in the library bottoms out here.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>

#include "betalab/errors.hpp"

namespace betalab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rational& q) { return boost::multiprecision::denominator(q); }

// floor(p/q) for q > 0 (cpp_rational keeps denominators positive).
inline Int rat_floor(const Rational& q) {
  Int n = rat_num(q), d = rat_den(q);
  Int t = n / d;
  if (n < 0 && t * d != n) --t;
  return t;
}

inline Int rat_ceil(const Rational& q) {
  Int n = rat_num(q), d = rat_den(q);
  Int t = n / d;
  if (n > 0 && t * d != n) ++t;
  return t;
}

inline int sign_of(const Rational& q) {
  if (q > 0) return 1;
  if (q < 0) return -1;
  return 0;
}

// Directed rounding to denominators 2^bits. Keeps interval arithmetic from
// accumulating unbounded exact representations.
inline Rational round_down(const Rational& q, unsigned bits) {
  Int scaled = rat_floor(Rational(rat_num(q) << bits, rat_den(q)));
  return Rational(scaled, Int(1) << bits);
}

inline Rational round_up(const Rational& q, unsigned bits) {
  Int scaled = rat_ceil(Rational(rat_num(q) << bits, rat_den(q)));
  return Rational(scaled, Int(1) << bits);
}

inline Rational pow2(long e) {
  if (e >= 0) return Rational(Int(1) << unsigned(e), 1);
  return Rational(1, Int(1) << unsigned(-e));
}

// Closed rational interval [lo, hi].
struct RatInterval {
  Rational lo, hi;

  RatInterval() = default;
  RatInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {}
  static RatInterval point(const Rational& q) { return {q, q}; }

  Rational width() const { return hi - lo; }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  bool contains(const Rational& q) const { return lo <= q && hi >= q; }

  RatInterval& round_out(unsigned bits) {
    lo = round_down(lo, bits);
    hi = round_up(hi, bits);
    return *this;
  }
};

inline RatInterval operator+(const RatInterval& a, const RatInterval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

inline RatInterval operator-(const RatInterval& a, const RatInterval& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

inline RatInterval operator*(const RatInterval& a, const RatInterval& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

// Exact reciprocal of an interval not containing zero.
inline RatInterval rat_inv(const RatInterval& a) {
  if (a.contains_zero()) throw DomainError("interval reciprocal across zero");
  return {Rational(rat_den(a.hi), rat_num(a.hi)), Rational(rat_den(a.lo), rat_num(a.lo))};
}

inline RatInterval operator/(const RatInterval& a, const RatInterval& b) {
  return a * rat_inv(b);
}

// a^e by repeated squaring with outward rounding; requires a.lo >= 0.
inline RatInterval rat_pow(const RatInterval& a, unsigned long e, unsigned bits) {
  RatInterval acc = RatInterval::point(1), base = a;
  while (e != 0) {
    if (e & 1) acc = (acc * base).round_out(bits);
    e >>= 1;
    if (e != 0) base = (base * base).round_out(bits);
  }
  return acc;
}

namespace detail {

// Decimal integer from a digit string; cpp_int's string constructor would
// read a leading zero as octal.
inline Int parse_int_decimal(std::string_view s) {
  auto bad = [&] { throw DomainError("malformed integer: '" + std::string(s) + "'"); };
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) bad();
  Int out = 0;
  for (char c : s) {
    if (c < '0' || c > '9') bad();
    out = out * 10 + (c - '0');
  }
  return negative ? Int(-out) : out;
}

}  // namespace detail

// Parses "p/q" or a plain integer. Throws DomainError on malformed input.
inline Rational parse_rational(std::string_view s) {
  auto bad = [&] { throw DomainError("malformed rational: '" + std::string(s) + "'"); };
  if (s.empty()) bad();
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_int_decimal(s));
  Int num = detail::parse_int_decimal(s.substr(0, slash));
  Int den = detail::parse_int_decimal(s.substr(slash + 1));
  if (den == 0) bad();
  return Rational(num, den);
}

// Decimal literal (digits, optional single point) to an exact rational.
inline Rational parse_decimal(std::string_view s) {
  auto bad = [&] { throw DomainError("malformed decimal literal: '" + std::string(s) + "'"); };
  if (s.empty()) bad();
  std::string digits;
  long frac_len = -1;
  for (char c : s) {
    if (c == '.') {
      if (frac_len >= 0) bad();
      frac_len = 0;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (frac_len >= 0) ++frac_len;
    } else {
      bad();
    }
  }
  if (digits.empty()) bad();
  Int num = detail::parse_int_decimal(digits);
  Int den = 1;
  for (long i = 0; i < std::max<long>(frac_len, 0); ++i) den *= 10;
  return Rational(num, den);
}

inline std::string rat_str(const Rational& q) { return q.str(); }

// Best-effort double conversion (display only, never used in decisions).
inline double rat_double(const Rational& q) { return q.template convert_to<double>(); }

// Natural log of a positive rational, accurate to a few ulps even when the
// value over/underflows double range. Display/diagnostic use only.
inline double rat_log(const Rational& q) {
  if (q <= 0) throw DomainError("log of nonpositive rational");
  auto log_int = [](const Int& x) {
    unsigned long b = boost::multiprecision::msb(x);
    Int mant = b > 52 ? Int(x >> (b - 52)) : x;
    double m = mant.template convert_to<double>();
    double shift = b > 52 ? double(b - 52) : 0.0;
    return std::log(m) + shift * 0.6931471805599453;
  };
  return log_int(rat_num(q)) - log_int(rat_den(q));
}

}  // namespace betalab
