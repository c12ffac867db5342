// reals.hpp -- certified real values for beta-expansion work.
//
// A base beta > 1 comes in three tiers:
//   * exact rational (decimal literals),
//   * algebraic (integer polynomial plus an isolating interval; arithmetic is
//     exact in the quotient ring, so ties like beta^2 - beta = 1 are decided
//     symbolically),
//   * series-defined (the expansion of 1 is prescribed; the value is known
//     only through arbitrarily refinable rational enclosures).
//
// Every quantity derived from beta is a Value: a rational-coefficient
// polynomial in beta divided by a power of beta. Comparisons and ceilings are
// certified -- they either decide from an exactness certificate, decide from
// an enclosure that excludes the alternative, or raise PrecisionExhausted.

#pragma once

#include <climits>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "betalab/digitstream.hpp"
#include "betalab/errors.hpp"
#include "betalab/rational.hpp"

namespace betalab {

struct RealEnclosure {
  Rational lo, hi;
  Rational width() const { return hi - lo; }
  bool contains(const Rational& q) const { return lo <= q && hi >= q; }
};

namespace detail {

using Poly = std::vector<Rational>;  // coefficient of x^i at index i

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline long poly_deg(const Poly& p) { return static_cast<long>(p.size()) - 1; }

inline Rational poly_eval(const Poly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline RatInterval poly_eval(const Poly& p, const RatInterval& x, unsigned bits) {
  RatInterval acc = RatInterval::point(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc = acc * x + RatInterval::point(*it);
    acc.round_out(bits);
  }
  return acc;
}

inline Poly poly_derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * int(i));
  poly_trim(d);
  return d;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  poly_trim(out);
  return out;
}

// Remainder of a modulo m (m nonzero).
inline Poly poly_mod(Poly a, const Poly& m) {
  poly_trim(a);
  long dm = poly_deg(m);
  while (poly_deg(a) >= dm) {
    Rational f = a.back() / m.back();
    long off = poly_deg(a) - dm;
    for (long i = 0; i <= dm; ++i) a[i + off] -= f * m[i];
    a.pop_back();
    poly_trim(a);
  }
  return a;
}

inline int sign_variations(const std::vector<Poly>& chain, const Rational& x) {
  int vars = 0, prev = 0;
  for (const auto& p : chain) {
    int s = sign_of(poly_eval(p, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++vars;
    prev = s;
  }
  return vars;
}

// Fixed-point helpers: quantities scaled by 2^W, directed rounding one ulp
// per operation. Plain Int shifts and multiplies keep interval evaluation off
// the rational-normalization path.
inline Int shr_floor(const Int& x, unsigned W) {
  if (x >= 0) return x >> W;
  return -((-x + ((Int(1) << W) - 1)) >> W);
}

inline Int shr_ceil(const Int& x, unsigned W) {
  if (x >= 0) return (x + ((Int(1) << W) - 1)) >> W;
  return -((-x) >> W);
}

inline Int fix_floor(const Rational& q, unsigned W) {
  Int n = rat_num(q) << W;
  const Int& d = rat_den(q);
  Int t = n / d;
  if (n < 0 && t * d != n) --t;
  return t;
}

inline Int fix_ceil(const Rational& q, unsigned W) {
  Int n = rat_num(q) << W;
  const Int& d = rat_den(q);
  Int t = n / d;
  if (n > 0 && t * d != n) ++t;
  return t;
}

// In-place multiply of the scaled interval [alo, ahi] by [xlo, xhi] with
// 0 <= xlo <= xhi, rounding outward.
inline void fix_mul_pos(Int& alo, Int& ahi, const Int& xlo, const Int& xhi, unsigned W) {
  Int lo = (alo >= 0) ? alo * xlo : alo * xhi;
  Int hi = (ahi >= 0) ? ahi * xhi : ahi * xlo;
  alo = shr_floor(lo, W);
  ahi = shr_ceil(hi, W);
}

// Enclosure of P(x) / x^shift over a positive interval x by scaled-integer
// Horner; shift >= 0.
inline RatInterval poly_eval_over_pow(const Poly& p, const RatInterval& x, long shift,
                                      unsigned W) {
  Int xlo = fix_floor(x.lo, W), xhi = fix_ceil(x.hi, W);
  Int alo = 0, ahi = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    fix_mul_pos(alo, ahi, xlo, xhi, W);
    alo += fix_floor(*it, W);
    ahi += fix_ceil(*it, W);
  }
  if (shift > 0) {
    Int one2 = Int(1) << (2 * W);
    Int plo = Int(1) << W, phi = plo;
    Int blo = one2 / xhi, bhi = one2 / xlo + 1;  // enclosure of 2^W * (1/x)
    for (unsigned long e = static_cast<unsigned long>(shift); e != 0; e >>= 1) {
      if (e & 1) {
        plo = shr_floor(plo * blo, W);
        phi = shr_ceil(phi * bhi, W);
      }
      if (e > 1) {
        blo = shr_floor(blo * blo, W);
        bhi = shr_ceil(bhi * bhi, W);
      }
    }
    fix_mul_pos(alo, ahi, plo, phi, W);
  }
  Int den = Int(1) << W;
  return {Rational(alo, den), Rational(ahi, den)};
}

// Number of distinct real roots of p in (a, b], assuming p(a) != 0, p(b) != 0.
inline long sturm_root_count(const Poly& p, const Rational& a, const Rational& b) {
  std::vector<Poly> chain{p, poly_derivative(p)};
  poly_trim(chain[0]);
  while (!chain.back().empty() && poly_deg(chain.back()) >= 1) {
    Poly r = poly_mod(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    poly_trim(r);
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  return sign_variations(chain, a) - sign_variations(chain, b);
}

}  // namespace detail

class Value;

class BetaImpl : public std::enable_shared_from_this<BetaImpl> {
 public:
  enum class Kind { Rational, Algebraic, Series };

  static constexpr unsigned kDefaultMaxBits = 4096;

  Kind kind = Kind::Rational;
  Rational rational_value;     // Kind::Rational
  detail::Poly poly;           // Kind::Algebraic: defining polynomial
  detail::Poly inv_beta_poly;  // representative of 1/beta in Q[x]/(poly)
  DigitStream series;          // Kind::Series: the prescribed expansion of 1
  int series_digit_bound = 1;
  unsigned max_bits = kDefaultMaxBits;
  std::string spec_string;

  bool exact_field() const { return kind != Kind::Series; }

  // Enclosure of beta with width <= 2^-bits (or exact point). Cached and
  // monotone: later calls only tighten. Throws PrecisionExhausted when the
  // request exceeds the budget and the bracket cannot reach the width.
  RatInterval refined(unsigned bits) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (kind == Kind::Rational) return RatInterval::point(rational_value);
    if (exact_point_) return bracket_;
    if (bits > max_bits) bits = max_bits;
    while (bracket_bits_ < bits) {
      // Bisection until the bracket is tight enough for the interval Newton
      // contraction to pay off; Newton then roughly doubles the bit count
      // per step instead of gaining one bit per evaluation.
      if (kind == Kind::Series && bracket_bits_ >= 96)
        newton_step_(bits);
      else
        refine_step_();
    }
    return bracket_;
  }

  bool exact_point() const {
    std::lock_guard<std::mutex> lock(mu_);
    return kind == Kind::Rational || exact_point_;
  }

  void set_initial_bracket(RatInterval b) {
    bracket_ = std::move(b);
    bracket_bits_ = 0;
    Rational w = bracket_.width();
    if (w == 0) exact_point_ = true;
    while (!exact_point_ && w <= pow2(-long(bracket_bits_ + 1))) ++bracket_bits_;
  }

  // Expansion-of-1 digit cache; filled by the expansion engine.
  struct OneCache {
    std::vector<int> digits;
    std::shared_ptr<Value> t_state;  // T^n(1) after |digits| steps
  };
  mutable std::mutex one_mu;
  mutable OneCache one_cache;

 private:
  mutable std::mutex mu_;
  mutable RatInterval bracket_;
  mutable unsigned bracket_bits_ = 0;
  mutable bool exact_point_ = false;

  void refine_step_() const {
    if (kind == Kind::Algebraic) {
      Rational mid = (bracket_.lo + bracket_.hi) / 2;
      Rational pm = detail::poly_eval(poly, mid);
      if (pm == 0) {
        bracket_ = RatInterval::point(mid);
        exact_point_ = true;
        bracket_bits_ = UINT_MAX;
        return;
      }
      if (sign_of(pm) == sign_of(detail::poly_eval(poly, bracket_.lo)))
        bracket_.lo = mid;
      else
        bracket_.hi = mid;
    } else {
      // Series: bisect on the strictly decreasing map b -> sum d_i b^-i.
      Rational mid = (bracket_.lo + bracket_.hi) / 2;
      int s = 0;
      for (int attempt = 0; attempt < 4 && s == 0; ++attempt) {
        s = series_sign_at_(mid, bracket_bits_ + 64 * (1u << attempt));
        if (s == 0) mid = bracket_.lo + (bracket_.hi - bracket_.lo) * Rational(5, 11);
      }
      if (s == 0)
        throw PrecisionExhausted("series-defined base: sign undecidable at bisection point");
      if (s > 0)
        bracket_.lo = mid;  // sum > 1 means b below the root
      else
        bracket_.hi = mid;
    }
    ++bracket_bits_;
  }

  // Bounds for S(b) = sum_i d_i b^-i at rational b > 1, as Ints scaled by
  // 2^W. Fixed-point dyadic arithmetic: every quantity is a nonnegative Int,
  // directed rounding costs one ulp per step, and no rational normalization
  // happens in the hot loop. The truncation tail is absorbed into the upper
  // bound via digits <= d1 and a geometric sum.
  std::pair<Int, Int> series_sum_bounds_(const Rational& b, unsigned W) const {
    double log2b = std::log2(rat_double(b));
    std::size_t terms = static_cast<std::size_t>(double(W + 8) / log2b) + 2;
    const Int num = rat_num(b), den = rat_den(b);
    const Int inv_lo = (den << W) / num;  // floor(2^W / b)
    const Int inv_hi = inv_lo + 1;
    const Int one = Int(1) << W;
    Int acc_lo = 0, acc_hi = 0;
    for (std::size_t i = terms; i >= 1; --i) {
      Int d = Int(series.at(i)) << W;
      acc_lo = ((acc_lo + d) * inv_lo) >> W;
      acc_hi = (((acc_hi + d) * inv_hi) >> W) + 1;
    }
    // Tail <= d1 * b^-terms / (b - 1); b^-terms bounded above by inv_hi^terms.
    Int pow_hi = one, base = inv_hi;
    for (std::size_t e = terms; e != 0; e >>= 1) {
      if (e & 1) pow_hi = ((pow_hi * base) >> W) + 1;
      if (e > 1) base = ((base * base) >> W) + 1;
    }
    acc_hi += (Int(series_digit_bound) * pow_hi * den) / (num - den) + 1;
    return {std::move(acc_lo), std::move(acc_hi)};
  }

  // Certified sign of S(b) - 1; 0 if undecided at this precision.
  int series_sign_at_(const Rational& b, unsigned bits) const {
    double bd = rat_double(b);
    if (bd <= 1.0) return 1;  // sum diverges toward infinity as b -> 1+
    const unsigned W = bits + 64;
    auto [lo, hi] = series_sum_bounds_(b, W);
    const Int one = Int(1) << W;
    if (lo > one) return 1;
    if (hi < one) return -1;
    return 0;
  }

  // Directed bound of the speed g(b) = sum_i i d_i b^-(i+1) at which S falls:
  // a lower bound at b (rounding down, tail dropped) when upper is false, an
  // upper bound (rounding up, tail added) when upper is true. Scaled by 2^W;
  // returns -1 when the precision cannot separate 1/b from 1.
  Int series_slope_bound_(const Rational& b, unsigned W, bool upper) const {
    double log2b = std::log2(rat_double(b));
    std::size_t terms = static_cast<std::size_t>(double(W + 8) / log2b) + 2;
    const Int num = rat_num(b), den = rat_den(b);
    const Int inv_lo = (den << W) / num;
    const Int inv = upper ? inv_lo + 1 : inv_lo;
    const Int one = Int(1) << W;
    if (inv >= one) return Int(-1);
    Int acc = 0;
    for (std::size_t i = terms; i >= 1; --i) {
      Int d = (Int(series.at(i)) * Int(i)) << W;
      acc = ((acc + d) * inv) >> W;
      if (upper) ++acc;
    }
    acc = (acc * inv) >> W;  // the extra b^-1 factor: i d_i b^-(i+1)
    if (upper) {
      ++acc;
      // Tail: sum_{i>T} i d_i q^{i+1} <= d1 (T+2) q^{T+1} / (1-q)^2, q = 1/b.
      Int pow_hi = one, base = inv;
      for (std::size_t e = terms + 1; e != 0; e >>= 1) {
        if (e & 1) pow_hi = ((pow_hi * base) >> W) + 1;
        if (e > 1) base = ((base * base) >> W) + 1;
      }
      Int inv1q = ((Int(1) << (2 * W)) / (one - inv)) + 1;  // 1/(1-q)
      Int tail = Int(series_digit_bound) * Int(terms + 2) * pow_hi;
      tail = ((tail * inv1q) >> W) + 1;
      tail = ((tail * inv1q) >> W) + 1;
      acc += tail;
    }
    return acc;
  }

  // One interval-Newton contraction toward `bits` of bracket width. S is
  // strictly decreasing, so the root r of S - 1 satisfies
  //   r = mid + (S(mid) - 1) / g(xi)   for some xi in the bracket,
  // and enclosing S(mid) - 1 and g over the bracket encloses r. Falls back
  // to one bisection step whenever the contraction fails to halve the width.
  void newton_step_(unsigned bits) const {
    const unsigned cur = bracket_bits_;
    const unsigned goal = std::min(bits, std::max(cur + cur, cur + 64));
    const unsigned W = goal + 64;
    const unsigned Wd = std::min(W, cur + 128);  // slope needs less precision
    const Rational old_width = bracket_.width();
    const Rational mid = round_down((bracket_.lo + bracket_.hi) / 2, W);
    const Int slope_hi = series_slope_bound_(bracket_.lo, Wd, true);
    const Int slope_lo = series_slope_bound_(bracket_.hi, Wd, false);
    if (mid <= bracket_.lo || mid >= bracket_.hi || slope_lo <= 0 || slope_hi <= 0) {
      refine_step_();
      return;
    }
    auto [slo, shi] = series_sum_bounds_(mid, W);
    const Int one = Int(1) << W;
    const Rational flo = Rational(slo - one, one);
    const Rational fhi = Rational(shi - one, one);
    const Int oned = Int(1) << Wd;
    const Rational g_lo = Rational(slope_lo, oned);
    const Rational g_hi = Rational(slope_hi, oned);
    Rational lo_new = mid + (flo >= 0 ? flo / g_hi : flo / g_lo);
    Rational hi_new = mid + (fhi >= 0 ? fhi / g_lo : fhi / g_hi);
    lo_new = std::max(round_down(lo_new, W), bracket_.lo);
    hi_new = std::min(round_up(hi_new, W), bracket_.hi);
    if (lo_new > hi_new || (hi_new - lo_new) * 2 > old_width) {
      refine_step_();
      return;
    }
    bracket_.lo = std::move(lo_new);
    bracket_.hi = std::move(hi_new);
    Rational w = bracket_.width();
    while (bracket_bits_ < bits && w <= pow2(-long(bracket_bits_ + 1))) ++bracket_bits_;
  }
};

using BetaHandle = std::shared_ptr<const BetaImpl>;

// A real number of the form P(beta) / beta^shift. Immutable.
class Value {
 public:
  Value() = default;
  Value(BetaHandle base, detail::Poly coeffs, long shift = 0)
      : base_(std::move(base)), c_(std::move(coeffs)), shift_(shift) {
    normalize_();
  }

  static Value constant(const Rational& q, const BetaHandle& base) {
    return Value(base, {q}, 0);
  }
  static Value beta(const BetaHandle& base) { return Value(base, {Rational(0), Rational(1)}, 0); }

  const BetaHandle& base() const { return base_; }
  const detail::Poly& coeffs() const { return c_; }
  long shift() const { return shift_; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1 && shift_ == 0; }
  Rational constant_value() const {
    if (!is_constant()) throw DomainError("value is not a certified rational constant");
    return c_.empty() ? Rational(0) : c_[0];
  }

  Value operator+(const Value& o) const { return combined_(o, false); }
  Value operator-(const Value& o) const { return combined_(o, true); }
  Value operator+(const Rational& q) const { return *this + constant(q, base_); }
  Value operator-(const Rational& q) const { return *this - constant(q, base_); }

  Value operator*(const Value& o) const {
    check_same_base_(o);
    return Value(base_, detail::poly_mul(c_, o.c_), shift_ + o.shift_);
  }
  Value operator*(const Rational& q) const {
    detail::Poly p = c_;
    for (auto& x : p) x *= q;
    return Value(base_, std::move(p), shift_);
  }
  Value operator-() const { return *this * Rational(-1); }

  // Multiply by beta^k (k may be negative).
  Value times_beta_pow(long k) const {
    if (k >= 0) {
      detail::Poly p(c_.size() + std::size_t(k), Rational(0));
      long drop = std::min<long>(k, shift_);
      std::copy(c_.begin(), c_.end(), p.begin() + (k - drop));
      // folding into shift keeps series-base polynomials small
      detail::poly_trim(p);
      return Value(base_, std::move(p), shift_ - drop);
    }
    return Value(base_, c_, shift_ - k);
  }

  // Certified enclosure of width <= eps. Throws BudgetExceeded when the
  // refinement budget cannot reach the requested width.
  RealEnclosure enclosure(const Rational& eps) const {
    if (eps <= 0) throw DomainError("enclosure width must be positive");
    for (unsigned bits = 64;; bits *= 2) {
      RatInterval e = enclosure_bits(bits);
      if (e.width() <= eps) return {e.lo, e.hi};
      if (bits >= base_->max_bits)
        throw BudgetExceeded("enclosure refinement budget exhausted");
    }
  }

  RatInterval enclosure_bits(unsigned bits) const {
    RatInterval b = base_->refined(bits);
    if (b.width() == 0) {  // base known exactly: evaluate without rounding
      Rational v = detail::poly_eval(c_, b.lo);
      for (long i = 0; i < shift_; ++i) v /= b.lo;
      return RatInterval::point(v);
    }
    return detail::poly_eval_over_pow(c_, b, shift_, bits + 64);
  }

  // Certified three-way comparison; -1, 0, +1. Equal is only returned with an
  // exactness certificate (constant difference, or zero in the quotient ring).
  int compare(const Value& o) const {
    Value d = *this - o;
    if (d.is_zero()) return 0;
    if (d.c_.size() == 1) return sign_of(d.c_[0]);  // beta^-shift > 0
    for (unsigned bits = 64;; bits *= 2) {
      RatInterval e = d.enclosure_bits(bits);
      if (e.lo > 0) return 1;
      if (e.hi < 0) return -1;
      if (e.width() == 0) return sign_of(e.lo);  // base known exactly
      if (bits >= base_->max_bits)
        throw PrecisionExhausted("comparison undecidable within refinement budget");
    }
  }
  int compare(const Rational& q) const { return compare(constant(q, base_)); }

  long long certified_ceil() const { return certified_round_(true); }
  long long certified_floor() const { return certified_round_(false); }

 private:
  BetaHandle base_;
  detail::Poly c_;
  long shift_ = 0;

  void check_same_base_(const Value& o) const {
    if (base_ != o.base_) throw DomainError("values over different bases");
  }

  Value combined_(const Value& o, bool negate) const {
    check_same_base_(o);
    long s = std::max(shift_, o.shift_);
    detail::Poly a = raised_(s), b = o.raised_(s);
    if (b.size() > a.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (negate)
        a[i] -= b[i];
      else
        a[i] += b[i];
    }
    return Value(base_, std::move(a), s);
  }

  detail::Poly raised_(long target_shift) const {
    long up = target_shift - shift_;
    detail::Poly p(c_.size() + std::size_t(up), Rational(0));
    std::copy(c_.begin(), c_.end(), p.begin() + up);
    return p;
  }

  void normalize_() {
    if (!base_) throw DomainError("value without a base");
    detail::poly_trim(c_);
    if (shift_ < 0) throw DomainError("negative beta-power shift");
    switch (base_->kind) {
      case BetaImpl::Kind::Rational: {
        Rational v = detail::poly_eval(c_, base_->rational_value);
        for (long i = 0; i < shift_; ++i) v /= base_->rational_value;
        c_.assign(1, v);
        detail::poly_trim(c_);
        shift_ = 0;
        break;
      }
      case BetaImpl::Kind::Algebraic: {
        c_ = detail::poly_mod(std::move(c_), base_->poly);
        while (shift_ > 0) {
          c_ = detail::poly_mod(detail::poly_mul(c_, base_->inv_beta_poly), base_->poly);
          --shift_;
        }
        break;
      }
      case BetaImpl::Kind::Series: {
        // Cancel common beta factors so constants stay recognizable.
        while (shift_ > 0 && !c_.empty() && c_[0] == 0) {
          c_.erase(c_.begin());
          --shift_;
        }
        if (c_.empty()) shift_ = 0;
        break;
      }
    }
  }

  long long certified_round_(bool ceil_mode) const {
    if (is_constant()) {
      Rational v = constant_value();
      Int r = ceil_mode ? rat_ceil(v) : rat_floor(v);
      return r.template convert_to<long long>();
    }
    for (unsigned bits = 64;; bits *= 2) {
      RatInterval e = enclosure_bits(bits);
      Int rlo = ceil_mode ? rat_ceil(e.lo) : rat_floor(e.lo);
      Int rhi = ceil_mode ? rat_ceil(e.hi) : rat_floor(e.hi);
      if (rlo == rhi) return rlo.template convert_to<long long>();
      if (e.width() == 0) return rlo.template convert_to<long long>();
      // The enclosure straddles integers: the value may be exactly one of
      // them, which an exact field can certify.
      if (base_->exact_field()) {
        for (Int m = rat_ceil(e.lo); m <= rat_floor(e.hi); ++m) {
          Value d = *this - Rational(m);
          if (d.is_zero()) return m.template convert_to<long long>();
        }
      }
      if (bits >= base_->max_bits) {
        Int m = rat_ceil(e.lo);
        throw PrecisionExhausted(
            ceil_mode ? "ceiling undecidable within refinement budget"
                      : "floor undecidable within refinement budget",
            m.template convert_to<long long>(), true);
      }
    }
  }
};

class Beta {
 public:
  Beta() = default;

  static Beta from_rational(const Rational& q, std::string spec = {}) {
    if (q <= 1) throw InvalidBetaSpec("beta must exceed 1, got " + rat_str(q));
    auto impl = std::make_shared<BetaImpl>();
    impl->kind = BetaImpl::Kind::Rational;
    impl->rational_value = q;
    impl->spec_string = spec.empty() ? "dec:" + rat_str(q) : std::move(spec);
    return Beta(std::move(impl));
  }

  static Beta from_polynomial(detail::Poly coeffs, Rational lo, Rational hi,
                              std::string spec = {}) {
    detail::poly_trim(coeffs);
    if (detail::poly_deg(coeffs) < 1)
      throw InvalidBetaSpec("polynomial spec needs degree >= 1");
    // Strip x^k factors; the isolating interval lies above 1, so 0 is not the
    // root being described.
    while (coeffs.front() == 0) coeffs.erase(coeffs.begin());
    if (detail::poly_deg(coeffs) < 1)
      throw InvalidBetaSpec("polynomial reduces to a monomial");
    if (lo >= hi) throw InvalidBetaSpec("isolating interval is empty");
    Rational plo = detail::poly_eval(coeffs, lo);
    Rational phi = detail::poly_eval(coeffs, hi);
    if (plo == 0 || phi == 0)
      throw InvalidBetaSpec("isolating interval endpoints must not be roots");
    if (sign_of(plo) == sign_of(phi))
      throw InvalidBetaSpec("no sign change over the isolating interval");
    if (detail::sturm_root_count(coeffs, lo, hi) != 1)
      throw InvalidBetaSpec("isolating interval does not contain exactly one root");

    auto impl = std::make_shared<BetaImpl>();
    impl->kind = BetaImpl::Kind::Algebraic;
    impl->poly = coeffs;
    // 1/beta from c0 + c1 b + ... + cd b^d = 0 with c0 != 0.
    detail::Poly inv;
    for (std::size_t i = 1; i < coeffs.size(); ++i) inv.push_back(-coeffs[i] / coeffs[0]);
    impl->inv_beta_poly = std::move(inv);
    impl->set_initial_bracket(RatInterval(lo, hi));
    if (spec.empty()) {
      std::ostringstream os;
      os << "poly:";
      for (std::size_t i = 0; i < coeffs.size(); ++i)
        os << (i ? "," : "") << rat_str(coeffs[i]);
      os << "@[" << rat_str(lo) << "," << rat_str(hi) << "]";
      spec = os.str();
    }
    impl->spec_string = std::move(spec);
    Beta b(std::move(impl));
    b.certify_above_one_();
    return b;
  }

  // Base defined by its expansion of 1. Periodic tails are converted to exact
  // integer-polynomial bases; aperiodic rule-based tails stay series-defined.
  static Beta from_one_expansion(const DigitStream& d, std::string spec = {},
                                 std::size_t check_depth = 64) {
    validate_one_expansion(d, check_depth);
    if (const auto* pf = d.periodic_form()) return from_periodic_(*pf, std::move(spec));

    auto impl = std::make_shared<BetaImpl>();
    impl->kind = BetaImpl::Kind::Series;
    impl->series = d;
    impl->series_digit_bound = d.at(1);
    impl->spec_string = spec.empty() ? "dseq:" + d.describe() : std::move(spec);
    Beta b(std::move(impl));
    b.impl_->set_initial_bracket(b.initial_series_bracket_());
    b.certify_above_one_();
    return b;
  }

  // Checks d1 >= 1, no eventual-zero tail structurally detectable, and
  // self-admissibility (every shift lexicographically at most the sequence
  // itself) to the requested depth.
  static void validate_one_expansion(const DigitStream& d, std::size_t check_depth) {
    if (!d.valid()) throw InvalidBetaSpec("empty digit stream");
    if (d.finite_padded())
      throw InvalidBetaSpec("finite dseq without a tail rule cannot define an expansion of 1");
    if (d.at(1) < 1) throw NotSelfAdmissible("first digit of the expansion of 1 must be >= 1");
    if (const auto* pf = d.periodic_form()) {
      bool nonzero = false;
      for (int x : pf->period) nonzero |= (x != 0);
      if (!nonzero) throw InvalidBetaSpec("periodic tail of zeros is not an expansion of 1");
    }
    std::vector<int> w = d.prefix(2 * check_depth);
    for (std::size_t k = 1; k <= check_depth; ++k) {
      for (std::size_t j = 0; j < check_depth; ++j) {
        int shifted = w[k + j], orig = w[j];
        if (shifted < orig) break;
        if (shifted > orig)
          throw NotSelfAdmissible("shift " + std::to_string(k) +
                                  " exceeds the sequence lexicographically");
      }
    }
  }

  static Beta parse(const std::string& spec) {
    auto starts = [&](const char* p) { return spec.rfind(p, 0) == 0; };
    if (starts("dec:")) {
      Rational q;
      try {
        q = parse_decimal(spec.substr(4));
      } catch (const DomainError& e) {
        throw InvalidBetaSpec(e.what());
      }
      if (q <= 1) throw InvalidBetaSpec("beta must exceed 1: " + spec);
      return from_rational(q, spec);
    }
    if (starts("poly:")) {
      auto at = spec.find('@');
      if (at == std::string::npos || spec.size() < at + 4 || spec[at + 1] != '[' ||
          spec.back() != ']')
        throw InvalidBetaSpec("polynomial spec needs '@[lo,hi]': " + spec);
      detail::Poly coeffs;
      std::istringstream cs(spec.substr(5, at - 5));
      std::string tok;
      while (std::getline(cs, tok, ',')) coeffs.push_back(parse_rational_or_throw_(tok));
      std::string iv = spec.substr(at + 2, spec.size() - at - 3);
      auto comma = iv.find(',');
      if (comma == std::string::npos)
        throw InvalidBetaSpec("interval needs two endpoints: " + spec);
      return from_polynomial(coeffs, parse_rational_or_throw_(iv.substr(0, comma)),
                             parse_rational_or_throw_(iv.substr(comma + 1)), spec);
    }
    if (starts("dseq:")) {
      DigitStream d = DigitStream::from_dseq_file(spec.substr(5));
      return from_one_expansion(d, spec);
    }
    throw InvalidBetaSpec("unknown beta spec '" + spec + "' (want dec:/poly:/dseq:)");
  }

  bool valid() const { return impl_ != nullptr; }
  BetaHandle impl() const { return impl_; }
  const std::string& spec_string() const { return impl_->spec_string; }
  bool exact() const { return impl_->exact_field(); }
  BetaImpl::Kind kind() const { return impl_->kind; }

  Value value() const { return Value::beta(impl_); }
  Value constant(const Rational& q) const { return Value::constant(q, impl_); }

  int alphabet_size() const {
    if (alphabet_ == 0) alphabet_ = static_cast<int>(value().certified_ceil());
    return alphabet_;
  }

  RealEnclosure refine(const Rational& eps) const { return value().enclosure(eps); }

  bool operator==(const Beta& o) const { return impl_ == o.impl_; }

 private:
  explicit Beta(std::shared_ptr<BetaImpl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<BetaImpl> impl_;
  mutable int alphabet_ = 0;

  static Rational parse_rational_or_throw_(const std::string& s) {
    try {
      return parse_rational(s);
    } catch (const DomainError& e) {
      throw InvalidBetaSpec(e.what());
    }
  }

  void certify_above_one_() const {
    for (unsigned bits = 8;; bits *= 2) {
      RatInterval b = impl_->refined(bits);
      if (b.lo > 1) return;
      if (b.hi <= 1 || b.width() == 0)
        throw InvalidBetaSpec("cannot certify beta > 1 for " + impl_->spec_string);
      if (bits >= impl_->max_bits)
        throw InvalidBetaSpec("beta > 1 undecidable within budget for " + impl_->spec_string);
    }
  }

  RatInterval initial_series_bracket_() const {
    // f(b) = sum d_i b^-i - 1 is strictly decreasing; f(d1 + 1) <= 0 always.
    Rational hi = Rational(impl_->series.at(1) + 1);
    Rational lo = Rational(33, 32);
    // Walk lo toward 1 until the partial sum alone certifies f(lo) > 0.
    for (int tries = 0; tries < 256; ++tries) {
      RatInterval r = rat_inv(RatInterval::point(lo));
      RatInterval acc = RatInterval::point(0);
      for (std::size_t i = 256; i >= 1; --i) {
        acc = (acc + RatInterval::point(impl_->series.at(i))) * r;
        acc.round_out(160);
      }
      if (acc.lo > 1) return RatInterval(lo, hi);
      lo = 1 + (lo - 1) / 2;
    }
    throw InvalidBetaSpec("series-defined base does not certify beta > 1");
  }

  static Beta from_periodic_(const DigitStream::PeriodicForm& pf, std::string spec);
};

// Eventually periodic expansion of 1 (head h_1..h_H, period c_1..c_P):
//   1 = sum h_i beta^-i + beta^-H * (sum c_j beta^-j) / (1 - beta^-P)
// clears denominators to the integer polynomial
//   x^(H+P) - x^H - (x^P - 1) D(x) - C(x),  D = sum h_i x^(H-i), C = sum c_j x^(P-j).
inline Beta Beta::from_periodic_(const DigitStream::PeriodicForm& pf, std::string spec) {
  const auto& h = pf.head;
  const auto& c = pf.period;
  long H = static_cast<long>(h.size()), P = static_cast<long>(c.size());
  detail::Poly p(std::size_t(H + P + 1), Rational(0));
  p[std::size_t(H + P)] += 1;
  p[std::size_t(H)] -= 1;
  for (long i = 1; i <= H; ++i) {
    p[std::size_t(H - i + P)] -= h[std::size_t(i - 1)];
    p[std::size_t(H - i)] += h[std::size_t(i - 1)];
  }
  for (long j = 1; j <= P; ++j) p[std::size_t(P - j)] -= c[std::size_t(j - 1)];
  detail::poly_trim(p);

  // Bracket the root via the monotone series map, then widen the demands on
  // the interval until Sturm certifies isolation.
  auto series = DigitStream::periodic(pf.head, pf.period);
  auto probe = std::make_shared<BetaImpl>();
  probe->kind = BetaImpl::Kind::Series;
  probe->series = series;
  probe->series_digit_bound = series.at(1);
  Beta probe_beta{probe};
  probe->set_initial_bracket(probe_beta.initial_series_bracket_());
  for (unsigned bits = 16; bits <= BetaImpl::kDefaultMaxBits; bits *= 2) {
    RatInterval b = probe->refined(bits);
    Rational lo = b.lo, hi = b.hi;
    if (detail::poly_eval(p, lo) == 0) lo -= pow2(-long(bits) - 4);
    if (detail::poly_eval(p, hi) == 0) hi += pow2(-long(bits) - 4);
    if (sign_of(detail::poly_eval(p, lo)) != sign_of(detail::poly_eval(p, hi)) &&
        detail::sturm_root_count(p, lo, hi) == 1)
      return from_polynomial(p, lo, hi, std::move(spec));
  }
  throw InvalidBetaSpec("failed to isolate the root of a periodic expansion of 1");
}

}  // namespace betalab
