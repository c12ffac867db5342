// verify.hpp -- the cross-check runner: per-base property checks with
// pass/fail/skipped status, counterexample payloads, and deterministic order.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "betalab/errors.hpp"
#include "betalab/expansion.hpp"
#include "betalab/irregularity.hpp"
#include "betalab/language.hpp"
#include "betalab/rational.hpp"
#include "betalab/reals.hpp"
#include "betalab/report.hpp"

namespace betalab {

struct VerifyCheck {
  std::string name;
  std::string beta_spec;
  std::string status;  // pass | fail | skipped
  std::string detail;  // counterexample for fail, reason for skipped
  double seconds = 0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (c.status == "fail") return false;
    return true;
  }
};

struct VerifyOptions {
  std::size_t oracle_n_max = 8;
  std::size_t bounds_n_max = 10;
  std::size_t star_m_max = 12;
  std::size_t fullness_n_max = 6;
  std::size_t fullness_m_max = 4;
  std::size_t roundtrip_n = 20;
  unsigned spike_r = 4;
  std::size_t spike_blocks = 2;
  std::size_t spike_cap = 200;
  long k_star_offset = 0;  // fault injection for negative-control tests
  Rational series_tol = Rational(1, Int("1000000000000"));  // inexact-base tolerance
};

namespace detail {

// |a - b| <= tol; exact fields decide by certificate, otherwise by enclosure.
inline bool within_tol(const Value& a, const Value& b, const Rational& tol, bool exact) {
  Value d = a - b;
  if (exact) return d.compare(Rational(0)) == 0;
  RealEnclosure e = d.enclosure(tol / 2);
  return e.lo >= -tol && e.hi <= tol;
}

}  // namespace detail

inline Json to_json(const VerifyReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back(Json{{"name", c.name},
                          {"beta", c.beta_spec},
                          {"status", c.status},
                          {"detail", c.detail},
                          {"seconds", c.seconds}});
  return Json{{"schema_version", kSchemaVersion}, {"ok", report.ok()}, {"checks", checks}};
}

// Runs every property check against every base. Failures are report entries,
// never exceptions; each failure carries a reproducible input.
inline VerifyReport verify_suite(const std::vector<Beta>& bases, const VerifyOptions& opt = {}) {
  VerifyReport report;
  for (const Beta& beta : bases) {
    const bool exact = beta.exact();
    const std::string spec = beta.spec_string();

    auto run = [&](const std::string& name, const std::function<void(VerifyCheck&)>& body) {
      VerifyCheck check{name, spec, "pass", "", 0};
      auto t0 = std::chrono::steady_clock::now();
      try {
        body(check);
      } catch (const Error& e) {
        check.status = "fail";
        check.detail = std::string(e.kind) + ": " + e.what();
      }
      check.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      report.checks.push_back(std::move(check));
    };

    run("cylinder-length-formula-vs-oracle", [&](VerifyCheck& check) {
      for (std::size_t n = 1; n <= opt.oracle_n_max; ++n) {
        auto cells = partition_oracle(beta, n);
        for (const auto& cell : cells) {
          long k = k_star(beta, cell.word) + opt.k_star_offset;
          k = std::clamp<long>(k, 0, static_cast<long>(n));
          Value len = detail::star_prefix_length(beta, n - std::size_t(k)).times_beta_pow(-k);
          if (!detail::within_tol(len, cell.length, opt.series_tol, exact)) {
            check.status = "fail";
            check.detail = "word=(" + Word{beta, cell.word}.str() + ") n=" + std::to_string(n);
            return;
          }
        }
      }
    });

    run("partition-sum", [&](VerifyCheck& check) {
      for (std::size_t n = 1; n <= opt.oracle_n_max; ++n) {
        LanguageSlice slice = enumerate_words(beta, n);
        Value sum = beta.constant(Rational(0));
        for (const auto& w : slice.words) sum = sum + cylinder(beta, w).length;
        if (!detail::within_tol(sum, beta.constant(Rational(1)), opt.series_tol, exact)) {
          check.status = "fail";
          check.detail = "n=" + std::to_string(n);
          return;
        }
      }
    });

    run("length-bounds-word", [&](VerifyCheck& check) {
      ZeroRunTable runs = zero_run_table(beta, opt.bounds_n_max);
      for (std::size_t n = 1; n <= opt.bounds_n_max; ++n) {
        long gamma = runs.gamma(n);
        Value lo = detail::beta_pow_neg(beta, long(n) + gamma + 1);
        Value hi = detail::beta_pow_neg(beta, long(n));
        for (const auto& w : enumerate_words(beta, n).words) {
          Value len = cylinder(beta, w).length;
          if (detail::compare_or_tie(len, lo) < 0 || detail::compare_or_tie(len, hi) > 0) {
            check.status = "fail";
            check.detail = "word=(" + Word{beta, w}.str() + ") n=" + std::to_string(n);
            return;
          }
        }
      }
    });

    run("length-bounds-star-prefix", [&](VerifyCheck& check) {
      for (std::size_t m = 1; m <= opt.star_m_max; ++m) {
        long t = zero_run_t(beta, m);
        Value len = detail::star_prefix_length(beta, m);
        Value lo = detail::beta_pow_neg(beta, long(m) + t + 1);
        Value hi = detail::beta_pow_neg(beta, long(m) + t);
        if (detail::compare_or_tie(len, lo) < 0 || detail::compare_or_tie(len, hi) > 0) {
          check.status = "fail";
          check.detail = "m=" + std::to_string(m);
          return;
        }
      }
    });

    run("fullness-laws", [&](VerifyCheck& check) {
      FullnessReport laws = fullness_laws_check(beta, opt.fullness_n_max, opt.fullness_m_max);
      if (!laws.ok()) {
        check.status = "fail";
        check.detail = laws.violations.front() + " (+" +
                       std::to_string(laws.violations.size() - 1) + " more)";
      }
    });

    run("one-expansion-round-trip", [&](VerifyCheck& check) {
      // The expansion of 1 must reproduce itself digit-for-digit when 1 is
      // fed back through the digit map (an honest iteration for every kind).
      Word direct = digits(beta, Rational(1), opt.roundtrip_n);
      Word stated = expansion_of_one(beta, opt.roundtrip_n);
      if (direct.digits != stated.digits) {
        check.status = "fail";
        check.detail = "digits(1) = (" + direct.str() + ") vs (" + stated.str() + ")";
      }
    });

    run("cylinder-membership", [&](VerifyCheck& check) {
      for (const Rational& x : {Rational(1, 2), Rational(2, 3)}) {
        Word w = digits(beta, x, 10);
        CylinderInfo info = cylinder(w);
        Value vx = beta.constant(x);
        bool inside = detail::compare_or_tie(vx - info.left, beta.constant(Rational(0))) > 0 &&
                      detail::compare_or_tie(vx - info.left, info.length) <= 0;
        if (!inside) {
          check.status = "fail";
          check.detail = "x=" + rat_str(x) + " word=(" + w.str() + ")";
          return;
        }
      }
    });

    run("spike-construction", [&](VerifyCheck& check) {
      ZeroRunTable runs = zero_run_table(beta, opt.spike_cap);
      if (runs.lambda_hat == 0) {
        check.status = "skipped";
        check.detail = "lambda_hat = 0 within search cap " + std::to_string(opt.spike_cap) +
                       "; the construction needs lambda > 0";
        return;
      }
      ConstructionSchedule sched =
          schedule(beta, {1}, opt.spike_blocks, opt.spike_r, opt.spike_cap);
      IrregularPoint point = build_irregular(beta, sched);
      DensityTrace trace = density_trace(beta, point.stream, sched.total_length);
      verify_spike(beta, sched, trace);  // throws AssertionFailure on violation
    });
  }

  std::stable_sort(report.checks.begin(), report.checks.end(),
                   [](const VerifyCheck& a, const VerifyCheck& b) {
                     if (a.name != b.name) return a.name < b.name;
                     return a.beta_spec < b.beta_spec;
                   });
  return report;
}

}  // namespace betalab
