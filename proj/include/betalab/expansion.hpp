// expansion.hpp -- the transformation T x = beta*x - ceil(beta*x) + 1 on
// (0,1], digit generation, the expansion of 1, and zero-run statistics.

#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "betalab/digitstream.hpp"
#include "betalab/errors.hpp"
#include "betalab/rational.hpp"
#include "betalab/reals.hpp"

namespace betalab {

struct Word {
  Beta base;
  std::vector<int> digits;

  std::size_t size() const { return digits.size(); }

  static Word make(const Beta& beta, std::vector<int> digits) {
    int bound = beta.alphabet_size() - 1;
    for (int d : digits)
      if (d < 0 || d > bound)
        throw DomainError("digit " + std::to_string(d) + " outside alphabet {0,...," +
                          std::to_string(bound) + "}");
    return Word{beta, std::move(digits)};
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (i) out.push_back(',');
      out += std::to_string(digits[i]);
    }
    return out;
  }
};

namespace detail {

inline void require_unit_interval(const Value& x) {
  if (x.compare(Rational(0)) <= 0 || x.compare(Rational(1)) > 0)
    throw DomainError("x must lie in (0,1]");
}

// One digit step: returns (digit, T x). The digit is ceil(beta*x) - 1 and
// T x = beta*x - digit, which stays in (0,1].
inline std::pair<int, Value> digit_step(const Beta& beta, const Value& x) {
  Value bx = x * beta.value();
  long long c = bx.certified_ceil();
  int digit = static_cast<int>(c - 1);
  return {digit, bx - Rational(digit)};
}

}  // namespace detail

inline Value step_T(const Beta& beta, const Value& x) {
  detail::require_unit_interval(x);
  return detail::digit_step(beta, x).second;
}

// First n digits of x in (0,1]. Exact under exact bases; otherwise each
// ceiling is decided from refined enclosures (or PrecisionExhausted).
inline Word digits(const Beta& beta, const Value& x, std::size_t n) {
  detail::require_unit_interval(x);
  std::vector<int> out;
  out.reserve(n);
  Value cur = x;
  for (std::size_t i = 0; i < n; ++i) {
    auto [d, next] = detail::digit_step(beta, cur);
    out.push_back(d);
    cur = std::move(next);
  }
  return Word{beta, std::move(out)};
}

inline Word digits(const Beta& beta, const Rational& x, std::size_t n) {
  return digits(beta, beta.constant(x), n);
}

// Greedy (floor-based) digits on [0,1); cross-check mode only. Coincides with
// the ceiling algorithm except at points with a finite greedy expansion.
inline Word greedy_digits(const Beta& beta, const Value& x0, std::size_t n) {
  if (x0.compare(Rational(0)) < 0 || x0.compare(Rational(1)) >= 0)
    throw DomainError("greedy digits need x in [0,1)");
  std::vector<int> out;
  Value cur = x0;
  for (std::size_t i = 0; i < n; ++i) {
    Value bx = cur * beta.value();
    long long f = bx.certified_floor();
    out.push_back(static_cast<int>(f));
    cur = bx - Rational(f);
  }
  return Word{beta, std::move(out)};
}

// n-th digit of the expansion of 1 (1-based). Series-defined bases carry
// their expansion by definition; exact bases iterate T from 1 with a cached
// orbit state.
inline int one_digit(const Beta& beta, std::size_t n) {
  const auto& impl = beta.impl();
  if (impl->kind == BetaImpl::Kind::Series) return impl->series.at(n);
  std::lock_guard<std::mutex> lock(impl->one_mu);
  auto& cache = impl->one_cache;
  if (!cache.t_state)
    cache.t_state = std::make_shared<Value>(beta.constant(Rational(1)));
  while (cache.digits.size() < n) {
    auto [d, next] = detail::digit_step(beta, *cache.t_state);
    cache.digits.push_back(d);
    cache.t_state = std::make_shared<Value>(std::move(next));
  }
  return cache.digits[n - 1];
}

inline Word expansion_of_one(const Beta& beta, std::size_t n) {
  std::vector<int> out(n);
  for (std::size_t i = 1; i <= n; ++i) out[i - 1] = one_digit(beta, i);
  return Word{beta, std::move(out)};
}

constexpr std::size_t kDefaultZeroRunBudget = 10000;

// t_n: length of the zero run immediately after position n in the expansion
// of 1. t_0 = 0 by convention (the first digit is nonzero).
inline long zero_run_t(const Beta& beta, std::size_t n,
                       std::size_t budget = kDefaultZeroRunBudget) {
  if (n == 0) return 0;
  for (std::size_t k = 0; k < budget; ++k)
    if (one_digit(beta, n + 1 + k) != 0) return static_cast<long>(k);
  throw BudgetExceeded("no nonzero digit within " + std::to_string(budget) +
                       " positions after position " + std::to_string(n));
}

struct ZeroRunTable {
  struct Row {
    std::size_t n;
    long t;
    long gamma;
  };
  Beta base;
  std::vector<Row> rows;
  Rational lambda_hat;      // max over n <= N of Gamma_n / n; a finite-N
  std::size_t lambda_at;    // lower-bound sample of lambda(beta), not a limit
  long gamma(std::size_t n) const { return rows.at(n - 1).gamma; }
  long t(std::size_t n) const { return rows.at(n - 1).t; }
};

inline ZeroRunTable zero_run_table(const Beta& beta, std::size_t N,
                                   std::size_t budget = kDefaultZeroRunBudget) {
  if (N < 1) throw DomainError("zero-run table needs N >= 1");
  ZeroRunTable table{beta, {}, Rational(0), 1};
  long gamma = 0;
  for (std::size_t n = 1; n <= N; ++n) {
    long t = zero_run_t(beta, n, budget);
    gamma = std::max(gamma, t);
    table.rows.push_back({n, t, gamma});
    Rational ratio(gamma, n);
    if (ratio > table.lambda_hat) {
      table.lambda_hat = ratio;
      table.lambda_at = n;
    }
  }
  return table;
}

// sum_i w_i beta^-i as an exact Value.
inline Value word_value(const Beta& beta, const std::vector<int>& w) {
  detail::Poly p(w.size(), Rational(0));
  for (std::size_t i = 0; i < w.size(); ++i) p[w.size() - 1 - i] = w[i];
  return Value(beta.impl(), std::move(p), static_cast<long>(w.size()));
}

inline Value word_value(const Word& w) { return word_value(w.base, w.digits); }

// Solves 1 = sum d_i beta^-i for beta, certified to width eps. Periodic
// digit providers yield exact algebraic bases.
inline Beta beta_from_one_expansion(const DigitStream& d, const Rational& eps,
                                    std::size_t check_depth = 64) {
  Beta beta = Beta::from_one_expansion(d, {}, check_depth);
  beta.refine(eps);  // certify reachability of the requested width now
  return beta;
}

namespace detail {

class PointSource final : public DigitSource {
 public:
  PointSource(Beta beta, Value x, std::string label)
      : beta_(std::move(beta)), label_(std::move(label)) {
    state_ = std::make_shared<Value>(std::move(x));
  }
  int at(std::size_t n) const override {
    if (n == 0) throw DomainError("digit index is 1-based");
    std::lock_guard<std::mutex> lock(mu_);
    while (digits_.size() < n) {
      auto [dg, next] = digit_step(beta_, *state_);
      digits_.push_back(dg);
      state_ = std::make_shared<Value>(std::move(next));
    }
    return digits_[n - 1];
  }
  std::string describe() const override { return label_; }

 private:
  Beta beta_;
  std::string label_;
  mutable std::mutex mu_;
  mutable std::vector<int> digits_;
  mutable std::shared_ptr<Value> state_;
};

class PrefixThenSource final : public DigitSource {
 public:
  PrefixThenSource(std::vector<int> prefix, DigitStream tail, std::string label)
      : prefix_(std::move(prefix)), tail_(std::move(tail)), label_(std::move(label)) {}
  int at(std::size_t n) const override {
    if (n == 0) throw DomainError("digit index is 1-based");
    if (n <= prefix_.size()) return prefix_[n - 1];
    return tail_.at(n - prefix_.size());
  }
  std::string describe() const override { return label_; }

 private:
  std::vector<int> prefix_;
  DigitStream tail_;
  std::string label_;
};

}  // namespace detail

inline DigitStream point_stream(const Beta& beta, const Value& x, std::string label = "point") {
  detail::require_unit_interval(x);
  return DigitStream(std::make_shared<detail::PointSource>(beta, x, std::move(label)));
}

inline DigitStream point_stream(const Beta& beta, const Rational& x, std::string label = "point") {
  return point_stream(beta, beta.constant(x), std::move(label));
}

inline DigitStream one_expansion_stream(const Beta& beta) {
  if (beta.impl()->kind == BetaImpl::Kind::Series) return beta.impl()->series;
  return point_stream(beta, Rational(1), "one-expansion");
}

inline DigitStream prefix_then(std::vector<int> prefix, DigitStream tail,
                               std::string label = "constructed") {
  return DigitStream(std::make_shared<detail::PrefixThenSource>(std::move(prefix), std::move(tail),
                                                                std::move(label)));
}

}  // namespace betalab
