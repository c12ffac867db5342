// language.hpp -- the admissible language of the beta-shift and exact
// cylinder geometry: lexicographic admissibility against the expansion of 1,
// pruned enumeration, the k* suffix statistic, exact cylinder lengths, and a
// brute-force partition oracle.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "betalab/errors.hpp"
#include "betalab/expansion.hpp"
#include "betalab/rational.hpp"
#include "betalab/reals.hpp"

namespace betalab {

enum class Ordering { Less, Equal, Greater };

// Lexicographic order on digit words; a shorter word is compared as a prefix
// and ranks below a longer word it prefixes.
inline Ordering lex_compare(const std::vector<int>& a, const std::vector<int>& b) {
  auto c = std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  if (c == std::strong_ordering::less) return Ordering::Less;
  if (c == std::strong_ordering::greater) return Ordering::Greater;
  return Ordering::Equal;
}

// Parry-style admissibility: (e_1..e_n) is admissible iff every shift
// sigma^i, 0 <= i <= n-1, is lexicographically at most the matching prefix of
// the expansion of 1. The i = 0 case rejects words starting above the first
// digit of the expansion of 1.
inline bool is_admissible(const Beta& beta, const std::vector<int>& w) {
  int bound = beta.alphabet_size() - 1;
  for (int d : w)
    if (d < 0 || d > bound) return false;
  std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; i + j < n; ++j) {
      int star = one_digit(beta, j + 1);
      if (w[i + j] < star) break;
      if (w[i + j] > star) return false;
    }
  }
  return true;
}

inline bool is_admissible(const Word& w) { return is_admissible(w.base, w.digits); }

// Incremental admissibility: feed digits one at a time. Tracks the shift
// offsets whose suffix still matches a prefix of the expansion of 1 exactly;
// only those can be violated by the next digit.
class AdmissibilityScanner {
 public:
  explicit AdmissibilityScanner(Beta beta) : beta_(std::move(beta)) {}

  // Returns false (and becomes inert) if appending `digit` breaks
  // admissibility.
  bool push(int digit) {
    if (failed_) return false;
    if (digit < 0 || digit > beta_.alphabet_size() - 1) return fail_();
    std::vector<std::size_t> next;
    next.reserve(active_.size() + 1);
    for (std::size_t start : active_) {
      int star = one_digit(beta_, length_ - start + 1);
      if (digit > star) return fail_();
      if (digit == star) next.push_back(start);
    }
    if (digit > one_digit(beta_, 1)) return fail_();
    if (digit == one_digit(beta_, 1)) next.push_back(length_);
    active_ = std::move(next);
    ++length_;
    return true;
  }

  bool ok() const { return !failed_; }
  std::size_t length() const { return length_; }

  // Smallest shift offset whose suffix matches a star-prefix exactly; this is
  // k* of the word read so far (length() when no offset matches).
  std::size_t min_match_offset() const { return active_.empty() ? length_ : active_.front(); }

  // Snapshot/restore support for depth-first enumeration.
  struct State {
    std::vector<std::size_t> active;
    std::size_t length;
    bool failed;
  };
  State save() const { return {active_, length_, failed_}; }
  void restore(State s) {
    active_ = std::move(s.active);
    length_ = s.length;
    failed_ = s.failed;
  }

 private:
  bool fail_() {
    failed_ = true;
    return false;
  }
  Beta beta_;
  std::vector<std::size_t> active_;  // shift offsets matching a star-prefix
  std::size_t length_ = 0;
  bool failed_ = false;
};

struct LanguageSlice {
  Beta base;
  std::size_t n = 0;
  std::vector<std::vector<int>> words;  // strictly increasing in lex order
  std::size_t count() const { return words.size(); }
};

constexpr std::size_t kDefaultEnumerationCap = 16;

// All admissible words of length n in lex order, by prefix-pruned DFS.
inline LanguageSlice enumerate_words(const Beta& beta, std::size_t n,
                                     std::size_t cap = kDefaultEnumerationCap) {
  if (n < 1) throw DomainError("enumeration needs n >= 1");
  if (n > cap)
    throw BudgetExceeded("enumeration length " + std::to_string(n) + " above cap " +
                         std::to_string(cap));
  LanguageSlice slice{beta, n, {}};
  int top = beta.alphabet_size() - 1;
  AdmissibilityScanner scan(beta);
  std::vector<int> word;
  auto dfs = [&](auto&& self) -> void {
    if (word.size() == n) {
      slice.words.push_back(word);
      return;
    }
    for (int d = 0; d <= top; ++d) {
      auto snap = scan.save();
      if (scan.push(d)) {
        word.push_back(d);
        self(self);
        word.pop_back();
      }
      scan.restore(std::move(snap));
    }
  };
  dfs(dfs);
  return slice;
}

// Smallest k >= 0 such that the suffix (e_{k+1}..e_n) equals the length-(n-k)
// prefix of the expansion of 1; k = n holds vacuously.
inline long k_star(const Beta& beta, const std::vector<int>& w) {
  if (!is_admissible(beta, w))
    throw NotAdmissible("k* of inadmissible word (" + Word{beta, w}.str() + ")");
  std::size_t n = w.size();
  for (std::size_t k = 0; k < n; ++k) {
    bool match = true;
    for (std::size_t j = 0; k + j < n && match; ++j)
      match = (w[k + j] == one_digit(beta, j + 1));
    if (match) return static_cast<long>(k);
  }
  return static_cast<long>(n);
}

inline long k_star(const Word& w) { return k_star(w.base, w.digits); }

enum class Fullness { Full, NotFull, Unknown };

inline const char* fullness_str(Fullness f) {
  switch (f) {
    case Fullness::Full: return "full";
    case Fullness::NotFull: return "notfull";
    default: return "unknown";
  }
}

struct CylinderInfo {
  Word word;
  Value left;
  Value length;
  Value right;
  long k_star = 0;
  Fullness fullness = Fullness::Unknown;
};

namespace detail {

// |I(e*_1..e*_m)| = 1 - sum_{i<=m} e*_i beta^-i: the cylinder of a prefix of
// the expansion of 1 has right endpoint 1.
inline Value star_prefix_length(const Beta& beta, std::size_t m) {
  Word star = expansion_of_one(beta, m);
  return beta.constant(Rational(1)) - word_value(star);
}

inline Fullness decide_fullness(const Value& length, const Beta& beta, std::size_t n) {
  Value full_len = beta.constant(Rational(1)).times_beta_pow(-static_cast<long>(n));
  try {
    return length.compare(full_len) == 0 ? Fullness::Full : Fullness::NotFull;
  } catch (const PrecisionExhausted&) {
    return Fullness::Unknown;
  }
}

}  // namespace detail

// Exact cylinder data via the suffix-matching length formula:
// |I(w)| = beta^-k* |I(e*_1..e*_{n-k*})|.
inline CylinderInfo cylinder(const Beta& beta, const std::vector<int>& w) {
  long k = k_star(beta, w);  // throws NotAdmissible for bad words
  std::size_t n = w.size();
  std::size_t m = n - static_cast<std::size_t>(k);
  Value left = word_value(beta, w);
  Value length = detail::star_prefix_length(beta, m).times_beta_pow(-k);
  CylinderInfo info{Word{beta, w}, left, length, left + length, k,
                    detail::decide_fullness(length, beta, n)};
  return info;
}

inline CylinderInfo cylinder(const Word& w) { return cylinder(w.base, w.digits); }

struct PartitionCell {
  std::vector<int> word;
  Value left;
  Value length;
};

// Brute-force cylinder lengths: consecutive left-endpoint differences over
// the lex-sorted slice. Deliberately ignorant of k* and the length formula;
// this is the oracle the formula is validated against.
inline std::vector<PartitionCell> partition_oracle(const Beta& beta, std::size_t n,
                                                   std::size_t cap = kDefaultEnumerationCap) {
  LanguageSlice slice = enumerate_words(beta, n, cap);
  std::vector<PartitionCell> cells;
  cells.reserve(slice.count());
  for (const auto& w : slice.words)
    cells.push_back({w, word_value(beta, w), Value()});
  for (std::size_t i = 0; i < cells.size(); ++i) {
    Value next_left =
        (i + 1 < cells.size()) ? cells[i + 1].left : beta.constant(Rational(1));
    cells[i].length = next_left - cells[i].left;
  }
  return cells;
}

struct FullnessReport {
  Beta base;
  std::size_t n_max = 0, m_max = 0;
  std::size_t checks = 0;
  std::vector<std::string> violations;
  std::vector<std::string> skipped;  // undecidable instances, if any
  bool ok() const { return violations.empty(); }
};

// Exhaustive small-scale verification of the four full-interval laws:
// (1) full <=> every concatenation with an admissible word stays admissible
//     (the "only if" direction checked to depth m_max);
// (2) lowering a nonzero admissible last digit gives full cylinders;
// (3) lengths multiply across a full left factor;
// (4) padding any word with Gamma_n+1 zeros (and a star-prefix with t_n+1
//     zeros) gives full cylinders.
inline FullnessReport fullness_laws_check(const Beta& beta, std::size_t n_max = 6,
                                          std::size_t m_max = 4) {
  FullnessReport report;
  report.base = beta;
  report.n_max = n_max;
  report.m_max = m_max;
  auto note_violation = [&](const std::string& law, const std::vector<int>& w,
                            const std::string& what) {
    report.violations.push_back(law + " word=(" + Word{beta, w}.str() + "): " + what);
  };

  std::vector<LanguageSlice> slices;  // slices[m-1] = Sigma^m
  for (std::size_t m = 1; m <= std::max(n_max, m_max); ++m)
    slices.push_back(enumerate_words(beta, m));

  ZeroRunTable runs = zero_run_table(beta, n_max);

  for (std::size_t n = 1; n <= n_max; ++n) {
    for (const auto& w : slices[n - 1].words) {
      CylinderInfo info = cylinder(beta, w);
      ++report.checks;

      bool all_concat = true;
      std::vector<int> witness;
      for (std::size_t m = 1; m <= m_max && all_concat; ++m) {
        for (const auto& wp : slices[m - 1].words) {
          std::vector<int> cat = w;
          cat.insert(cat.end(), wp.begin(), wp.end());
          if (!is_admissible(beta, cat)) {
            all_concat = false;
            witness = wp;
            break;
          }
        }
      }
      if (info.fullness == Fullness::Unknown) {
        report.skipped.push_back("law1 fullness undecided for (" + Word{beta, w}.str() + ")");
      } else if ((info.fullness == Fullness::Full) != all_concat) {
        note_violation("law1", w,
                       all_concat ? "all concatenations admissible but cylinder not full"
                                  : "full cylinder rejects concatenation (" +
                                        Word{beta, witness}.str() + ")");
      }

      // law2: last digit below a nonzero admissible digit forces fullness.
      if (!w.empty() && w.back() > 0) {
        for (int e = 0; e < w.back(); ++e) {
          std::vector<int> lowered = w;
          lowered.back() = e;
          CylinderInfo low = cylinder(beta, lowered);
          ++report.checks;
          if (low.fullness == Fullness::NotFull)
            note_violation("law2", lowered, "expected full below digit " +
                                                std::to_string(w.back()));
        }
      }

      // law3: multiplicativity over a full left factor.
      if (info.fullness == Fullness::Full) {
        for (std::size_t m = 1; m <= m_max; ++m) {
          for (const auto& wp : slices[m - 1].words) {
            std::vector<int> cat = w;
            cat.insert(cat.end(), wp.begin(), wp.end());
            if (!is_admissible(beta, cat)) {
              note_violation("law3", cat, "full factor cannot extend");
              continue;
            }
            Value lhs = cylinder(beta, cat).length;
            Value rhs = info.length * cylinder(beta, wp).length;
            ++report.checks;
            try {
              if (lhs.compare(rhs) != 0)
                note_violation("law3", cat, "length is not the product of factors");
            } catch (const PrecisionExhausted&) {
              // Indistinguishable within the full budget: equal to far beyond
              // any tolerance used here.
            }
          }
        }
      }

      // law4, first form: w * 0^{Gamma_n+1} is full.
      std::vector<int> padded = w;
      padded.insert(padded.end(), std::size_t(runs.gamma(n) + 1), 0);
      CylinderInfo pad = cylinder(beta, padded);
      ++report.checks;
      if (pad.fullness == Fullness::NotFull)
        note_violation("law4", padded, "zero-padded word is not full");
      else if (pad.fullness == Fullness::Unknown)
        report.skipped.push_back("law4 fullness undecided for (" + Word{beta, padded}.str() + ")");
    }

    // law4, second form: e*|n * 0^{t_n+1} is full.
    std::vector<int> star = expansion_of_one(beta, n).digits;
    star.insert(star.end(), std::size_t(runs.t(n) + 1), 0);
    CylinderInfo starpad = cylinder(beta, star);
    ++report.checks;
    if (starpad.fullness == Fullness::NotFull)
      note_violation("law4*", star, "padded star-prefix is not full");
    else if (starpad.fullness == Fullness::Unknown)
      report.skipped.push_back("law4* fullness undecided for (" + Word{beta, star}.str() + ")");
  }
  return report;
}

}  // namespace betalab
