// irregularity.hpp -- density traces -log_beta|I_n(x)|/n with exact per-n
// brackets, finite-sample density summaries, the closed-form dimension
// spectrum, and the constructive generator of points whose densities spike.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "betalab/digitstream.hpp"
#include "betalab/errors.hpp"
#include "betalab/expansion.hpp"
#include "betalab/language.hpp"
#include "betalab/rational.hpp"
#include "betalab/reals.hpp"

namespace betalab {

struct DensityRecord {
  std::size_t n = 0;
  double d_lo = 0, d_hi = 0;  // certified two-sided bounds on -log_beta|I_n|/n
  long k_star = 0;
  long t_aux = 0;  // t_{n - k*_n}: zero run after the matched star-prefix
  long gamma = 0;  // Gamma_n of the expansion of 1
  Fullness fullness = Fullness::Unknown;
  bool bracket_ok = false;  // exact check of beta^-(n+t+1) <= |I_n| <= beta^-(n+t)
  Value length;             // exact cylinder length
};

struct DensityTrace {
  Beta base;
  std::string source;
  std::vector<DensityRecord> records;
  const DensityRecord& at(std::size_t n) const { return records.at(n - 1); }
};

namespace detail {

// Comparisons undecidable within the full budget are separated by far less
// than any tolerance in play; treat them as ties.
inline int compare_or_tie(const Value& a, const Value& b) {
  try {
    return a.compare(b);
  } catch (const PrecisionExhausted&) {
    return 0;
  }
}

inline Value beta_pow_neg(const Beta& beta, long e) {
  return beta.constant(Rational(1)).times_beta_pow(-e);
}

// Positive enclosure with relative width below 2^-20, for log display.
inline RatInterval display_enclosure(const Value& v) {
  for (unsigned bits = 64;; bits *= 2) {
    RatInterval e = v.enclosure_bits(bits);
    if (e.lo > 0 && (e.hi - e.lo) * (Int(1) << 20) <= e.lo) return e;
    if (bits >= BetaImpl::kDefaultMaxBits)
      throw BudgetExceeded("cannot certify a positive enclosure for display");
  }
}

}  // namespace detail

// Trace of certified densities d_n = -log_beta|I_n(x)|/n for the point whose
// digits the source yields. Lengths are exact; only the reported d_lo/d_hi
// doubles involve logarithms, outward-widened so the true d_n lies between.
inline DensityTrace density_trace(const Beta& beta, const DigitStream& source, std::size_t N) {
  if (N < 1) throw DomainError("density trace needs N >= 1");
  DensityTrace trace{beta, source.describe(), {}};
  trace.records.reserve(N);
  ZeroRunTable runs = zero_run_table(beta, N);
  RealEnclosure be = beta.refine(pow2(-48));
  double log_b_lo = rat_log(be.lo), log_b_hi = rat_log(be.hi);
  AdmissibilityScanner scan(beta);
  for (std::size_t n = 1; n <= N; ++n) {
    int digit = source.at(n);
    if (!scan.push(digit))
      throw NotAdmissible("source digit " + std::to_string(digit) + " at position " +
                          std::to_string(n) + " breaks admissibility");
    long k = static_cast<long>(scan.min_match_offset());
    std::size_t m = n - static_cast<std::size_t>(k);
    long t = (m == 0) ? 0 : runs.t(m);
    Value length = detail::star_prefix_length(beta, m).times_beta_pow(-k);
    Fullness full = detail::decide_fullness(length, beta, n);
    bool bracket_ok =
        detail::compare_or_tie(length, detail::beta_pow_neg(beta, long(n) + t + 1)) >= 0 &&
        detail::compare_or_tie(length, detail::beta_pow_neg(beta, long(n) + t)) <= 0;
    double d_lo = 1.0, d_hi = 1.0;
    if (full != Fullness::Full) {
      RatInterval e = detail::display_enclosure(length);
      double num_lo = -rat_log(e.hi), num_hi = -rat_log(e.lo);
      double den_lo = double(n) * log_b_lo, den_hi = double(n) * log_b_hi;
      d_lo = num_lo >= 0 ? num_lo / den_hi : num_lo / den_lo;
      d_hi = num_hi >= 0 ? num_hi / den_lo : num_hi / den_hi;
      d_lo -= 1e-9 * std::fabs(d_lo) + 1e-12;
      d_hi += 1e-9 * std::fabs(d_hi) + 1e-12;
    }
    trace.records.push_back({n, d_lo, d_hi, k, t, runs.gamma(n), full, bracket_ok, length});
  }
  return trace;
}

inline DensityTrace density_trace(const Beta& beta, const Value& x, std::size_t N) {
  return density_trace(beta, point_stream(beta, x), N);
}

struct DensitySummary {
  Beta base;
  std::size_t tail_start = 0;
  std::size_t tail_count = 0;
  double gap_tol = 0;
  double d_lower = 0;  // min of the tail densities (finite-N estimate of D_)
  double d_upper = 0;  // max of the tail densities (finite-N estimate of D-bar)
  double tau_hat = 0;  // max over the tail of t_{n-k*_n}/n
  double lemma_gap = 0;        // |d_upper - (1 + tau_hat)|
  bool brackets_exact = true;  // every tail record passed its exact bracket
  double max_gap = 0;          // largest hole the tail densities leave in [1, d_upper]
  bool coverage_ok = false;    // max_gap <= gap_tol
};

// Finite-sample estimates over records with n >= tail_start. These are
// diagnostics at depth N, never limit values.
inline DensitySummary density_summary(const DensityTrace& trace, std::size_t tail_start,
                                      double gap_tol) {
  if (gap_tol <= 0) throw DomainError("gap tolerance must be positive");
  if (tail_start < 1) tail_start = 1;
  if (tail_start > trace.records.size())
    throw EmptyTail("tail_start " + std::to_string(tail_start) + " beyond trace length " +
                    std::to_string(trace.records.size()));
  DensitySummary s;
  s.base = trace.base;
  s.tail_start = tail_start;
  s.gap_tol = gap_tol;
  std::vector<double> mids;
  for (const auto& rec : trace.records) {
    if (rec.n < tail_start) continue;
    double mid = (rec.d_lo + rec.d_hi) / 2;
    mids.push_back(mid);
    if (s.tail_count == 0) {
      s.d_lower = s.d_upper = mid;
    } else {
      s.d_lower = std::min(s.d_lower, mid);
      s.d_upper = std::max(s.d_upper, mid);
    }
    s.tau_hat = std::max(s.tau_hat, double(rec.t_aux) / double(rec.n));
    s.brackets_exact = s.brackets_exact && rec.bracket_ok;
    ++s.tail_count;
  }
  s.lemma_gap = std::fabs(s.d_upper - (1.0 + s.tau_hat));
  mids.push_back(1.0);  // densities accumulate on [1, d_upper]; anchor the left end
  std::sort(mids.begin(), mids.end());
  for (std::size_t i = 1; i < mids.size(); ++i)
    s.max_gap = std::max(s.max_gap, mids[i] - mids[i - 1]);
  s.coverage_ok = s.max_gap <= gap_tol;
  return s;
}

struct SpectrumQuery {
  double lambda = 0;
  double delta = 0;
};

// Closed-form dimension of the level set at density exceedance delta:
// (lambda + 1 - delta) / (delta * lambda), for delta in (1, 1+lambda].
inline double spectrum_dim(double lambda, double delta) {
  if (!(lambda > 0)) throw DomainError("spectrum needs lambda > 0");
  if (!(delta > 1.0) || !(delta <= 1.0 + lambda))
    throw DomainError("delta must lie in (1, 1 + lambda]");
  return (lambda + 1.0 - delta) / (delta * lambda);
}

inline double spectrum_dim(const SpectrumQuery& q) { return spectrum_dim(q.lambda, q.delta); }

struct ScheduleBlock {
  std::size_t m = 0;   // star-prefix length copied in this block
  long t = 0;          // t_m: trailing zero run appended after it
  std::size_t h = 0;   // digits preceding the block
  std::size_t n = 0;   // spike position h + m
  std::size_t end = 0; // n + t + 1: the block ends in a full cylinder here
  double ratio = 0;    // t_m / m, the block's density gain
};

struct ConstructionSchedule {
  Beta base;
  std::vector<int> seed;
  long gamma_seed = 0;  // Gamma_{ell} for ell = seed length
  unsigned r = 10;
  std::size_t search_cap = 0;
  std::vector<ScheduleBlock> blocks;
  Rational lambda_hat{0};  // best Gamma_n/n within search_cap (lower bound sample)
  bool lambda_zero = false;
  std::size_t total_length = 0;  // end of the last block
  std::size_t ell() const { return seed.size(); }
};

// Chooses K block lengths m_k <= search_cap, each maximizing t_m/m subject to
// m_k >= r*h_k, where h_k is the digit count before block k. The per-block
// maximum can strand a later block above the cap, so the search backtracks to
// the best ratio sequence that stays feasible for all K blocks.
inline ConstructionSchedule schedule(const Beta& beta, const std::vector<int>& seed,
                                     std::size_t K, unsigned r, std::size_t search_cap) {
  if (K < 1) throw DomainError("schedule needs K >= 1");
  if (r < 1) throw DomainError("schedule needs r >= 1");
  if (seed.empty()) throw DomainError("schedule needs a nonempty seed");
  if (seed.size() > search_cap) throw DomainError("seed longer than search_cap");
  if (!is_admissible(beta, seed))
    throw NotAdmissible("seed (" + Word{beta, seed}.str() + ") is not admissible");
  ZeroRunTable runs = zero_run_table(beta, search_cap);

  ConstructionSchedule sched;
  sched.base = beta;
  sched.seed = seed;
  sched.gamma_seed = runs.gamma(seed.size());
  sched.r = r;
  sched.search_cap = search_cap;
  sched.lambda_hat = runs.lambda_hat;
  sched.lambda_zero = runs.lambda_hat == 0;

  std::vector<std::size_t> order(search_cap);
  for (std::size_t i = 0; i < search_cap; ++i) order[i] = i + 1;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    Rational ra(runs.t(a), a), rb(runs.t(b), b);
    if (ra != rb) return ra > rb;
    return a < b;
  });

  std::size_t h1 = seed.size() + static_cast<std::size_t>(sched.gamma_seed) + 1;
  auto dfs = [&](auto&& self, std::size_t k, std::size_t h) -> bool {
    if (k == K) return true;
    for (std::size_t m : order) {
      if (m < std::size_t(r) * h || m > search_cap) continue;
      long t = runs.t(m);
      sched.blocks.push_back(
          {m, t, h, h + m, h + m + std::size_t(t) + 1, double(t) / double(m)});
      if (self(self, k + 1, h + m + std::size_t(t) + 1)) return true;
      sched.blocks.pop_back();
    }
    return false;
  };
  if (!dfs(dfs, 0, h1))
    throw ScheduleInfeasible("no " + std::to_string(K) + "-block schedule with m_k >= " +
                             std::to_string(r) + "*h_k fits under search_cap " +
                             std::to_string(search_cap));
  sched.total_length = sched.blocks.back().end;
  return sched;
}

struct IrregularPoint {
  DigitStream stream;     // full expansion: prefix, then the expansion of 1
  RealEnclosure enclosure;
  std::size_t prefix_length = 0;
  Value value;  // exact value of the constructed point
};

// Materializes the scheduled digit prefix: seed, Gamma+1 zeros, then per
// block a star-prefix of length m_k followed by t_{m_k}+1 zeros. Each block
// ends in a full cylinder, so the stream may continue with the expansion of 1
// and every prefix stays admissible; the point is the exact right endpoint of
// the final cylinder.
inline IrregularPoint build_irregular(const Beta& beta, const ConstructionSchedule& sched) {
  if (sched.blocks.empty()) throw DomainError("schedule has no blocks");
  std::vector<int> prefix = sched.seed;
  prefix.insert(prefix.end(), static_cast<std::size_t>(sched.gamma_seed) + 1, 0);
  for (const auto& blk : sched.blocks) {
    if (prefix.size() != blk.h) throw DomainError("malformed schedule: block offsets do not chain");
    Word star = expansion_of_one(beta, blk.m);
    prefix.insert(prefix.end(), star.digits.begin(), star.digits.end());
    prefix.insert(prefix.end(), static_cast<std::size_t>(blk.t) + 1, 0);
  }
  if (prefix.size() != sched.total_length)
    throw DomainError("malformed schedule: total length mismatch");
  Value left = word_value(beta, prefix);
  Value point = left + detail::beta_pow_neg(beta, static_cast<long>(prefix.size()));
  RealEnclosure enc = point.enclosure(pow2(-64));
  DigitStream stream =
      prefix_then(prefix, one_expansion_stream(beta), "irregular(" + beta.spec_string() + ")");
  return {std::move(stream), enc, prefix.size(), std::move(point)};
}

struct SpikeCheck {
  std::size_t k = 0;  // block index, 1-based
  std::size_t n = 0;  // spike position n_k
  long t = 0;         // t_{m_k}
  double d_lo = 0, d_hi = 0;          // trace density at the spike
  double target_lo = 0, target_hi = 0;  // (n+t)/n and (n+t+1)/n
  bool bracket_ok = false;  // exact length bracket at the spike
  bool full_ok = false;     // block-end record is exactly full with d = 1
};

struct SpikeReport {
  Beta base;
  Rational lambda_hat{0};
  double spike_target = 0;  // 1 + lambda_hat, the level the spikes chase
  std::vector<SpikeCheck> checks;
};

// Checks the trace of a constructed point against its schedule: at each
// spike n_k the exact length bracket beta^-(n+t+1) <= |I| <= beta^-(n+t)
// must hold, and each block-end cylinder must be exactly full. Throws
// AssertionFailure naming the first offending block.
inline SpikeReport verify_spike(const Beta& beta, const ConstructionSchedule& sched,
                                const DensityTrace& trace) {
  if (sched.blocks.empty()) throw DomainError("schedule has no blocks");
  if (trace.records.size() < sched.total_length)
    throw DomainError("trace too short: need N >= " + std::to_string(sched.total_length));
  SpikeReport report{beta, sched.lambda_hat, 1.0 + rat_double(sched.lambda_hat), {}};
  for (std::size_t k = 0; k < sched.blocks.size(); ++k) {
    const auto& blk = sched.blocks[k];
    const DensityRecord& spike = trace.at(blk.n);
    const DensityRecord& end = trace.at(blk.end);
    SpikeCheck check;
    check.k = k + 1;
    check.n = blk.n;
    check.t = blk.t;
    check.d_lo = spike.d_lo;
    check.d_hi = spike.d_hi;
    check.target_lo = double(blk.n + std::size_t(blk.t)) / double(blk.n);
    check.target_hi = double(blk.n + std::size_t(blk.t) + 1) / double(blk.n);
    check.bracket_ok =
        detail::compare_or_tie(spike.length,
                               detail::beta_pow_neg(beta, long(blk.n) + blk.t + 1)) >= 0 &&
        detail::compare_or_tie(spike.length, detail::beta_pow_neg(beta, long(blk.n) + blk.t)) <= 0;
    check.full_ok = end.fullness == Fullness::Full && end.d_lo == 1.0 && end.d_hi == 1.0;
    report.checks.push_back(check);
    if (!check.bracket_ok)
      throw AssertionFailure("density spike bracket fails at block k=" + std::to_string(k + 1) +
                             " (n=" + std::to_string(blk.n) + ")");
    if (!check.full_ok)
      throw AssertionFailure("block-end cylinder not full at block k=" + std::to_string(k + 1) +
                             " (n=" + std::to_string(blk.end) + ")");
  }
  return report;
}

}  // namespace betalab
