// digitstream.hpp -- lazily evaluated infinite digit sequences and the dseq
// file format (explicit digits with an optional periodic-tail or rule footer).

#pragma once

#include <cctype>
#include <cstddef>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "betalab/errors.hpp"

namespace betalab {

// 1-based access to an infinite digit sequence. Implementations must be
// deterministic; at(n) always returns the same digit.
class DigitSource {
 public:
  virtual ~DigitSource() = default;
  virtual int at(std::size_t n) const = 0;
  virtual std::string describe() const = 0;
};

class DigitStream {
 public:
  DigitStream() = default;
  explicit DigitStream(std::shared_ptr<const DigitSource> src) : src_(std::move(src)) {}

  int at(std::size_t n) const { return src_->at(n); }
  bool valid() const { return src_ != nullptr; }
  std::string describe() const { return src_ ? src_->describe() : "<null>"; }

  std::vector<int> prefix(std::size_t n) const {
    std::vector<int> out(n);
    for (std::size_t i = 1; i <= n; ++i) out[i - 1] = at(i);
    return out;
  }

  // Set for streams known to be eventually periodic (head then repeated
  // period); lets base construction fall back to exact polynomial arithmetic.
  struct PeriodicForm {
    std::vector<int> head;
    std::vector<int> period;
  };
  const PeriodicForm* periodic_form() const { return periodic_ ? &*periodic_ : nullptr; }

  // True for dseq inputs that listed finitely many digits with no tail rule;
  // such sequences are zero-padded for display but are not a valid expansion
  // of 1.
  bool finite_padded() const { return finite_padded_; }

  static DigitStream periodic(std::vector<int> head, std::vector<int> period);
  static DigitStream doubling_runs();
  static DigitStream from_dseq_file(const std::string& path);
  static DigitStream from_dseq_text(const std::string& text, const std::string& name);

 private:
  std::shared_ptr<const DigitSource> src_;
  std::shared_ptr<const PeriodicForm> periodic_;
  bool finite_padded_ = false;
};

namespace detail {

class PeriodicSource final : public DigitSource {
 public:
  PeriodicSource(std::vector<int> head, std::vector<int> period)
      : head_(std::move(head)), period_(std::move(period)) {
    if (period_.empty()) throw DomainError("periodic digit source needs a nonempty period");
  }
  int at(std::size_t n) const override {
    if (n == 0) throw DomainError("digit index is 1-based");
    if (n <= head_.size()) return head_[n - 1];
    return period_[(n - head_.size() - 1) % period_.size()];
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "periodic(head=" << head_.size() << ",period=" << period_.size() << ")";
    return os.str();
  }

 private:
  std::vector<int> head_, period_;
};

// 1, 0, 1, 0^2, 1, 0^4, 1, 0^8, ... : ones at positions 2^j + j.
class DoublingRunsSource final : public DigitSource {
 public:
  int at(std::size_t n) const override {
    if (n == 0) throw DomainError("digit index is 1-based");
    std::size_t one = 1, run = 1;
    while (one < n) {
      one += run + 1;
      run *= 2;
    }
    return one == n ? 1 : 0;
  }
  std::string describe() const override { return "rule:doubling-runs"; }
};

}  // namespace detail

inline DigitStream DigitStream::periodic(std::vector<int> head, std::vector<int> period) {
  DigitStream s(std::make_shared<detail::PeriodicSource>(head, period));
  s.periodic_ = std::make_shared<const PeriodicForm>(PeriodicForm{std::move(head), std::move(period)});
  return s;
}

inline DigitStream DigitStream::doubling_runs() {
  return DigitStream(std::make_shared<detail::DoublingRunsSource>());
}

// dseq format: UTF-8 lines of comma-separated digits, whitespace ignored,
// optional final line `repeat:<period>` or `rule:doubling-runs`.
inline DigitStream DigitStream::from_dseq_text(const std::string& text, const std::string& name) {
  std::vector<int> digits;
  std::string footer;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string stripped;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) stripped.push_back(c);
    if (stripped.empty()) continue;
    if (!footer.empty())
      throw InvalidBetaSpec("dseq '" + name + "': footer must be the final line");
    if (stripped.rfind("repeat:", 0) == 0 || stripped.rfind("rule:", 0) == 0) {
      footer = stripped;
      continue;
    }
    std::istringstream ls(stripped);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      if (tok.empty()) continue;
      try {
        digits.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw InvalidBetaSpec("dseq '" + name + "': bad digit token '" + tok + "'");
      }
      if (digits.back() < 0) throw InvalidBetaSpec("dseq '" + name + "': negative digit");
    }
  }
  if (footer.rfind("rule:", 0) == 0) {
    if (footer != "rule:doubling-runs")
      throw InvalidBetaSpec("dseq '" + name + "': unknown rule '" + footer + "'");
    if (!digits.empty())
      throw InvalidBetaSpec("dseq '" + name + "': rule footer does not take explicit digits");
    return doubling_runs();
  }
  if (footer.rfind("repeat:", 0) == 0) {
    std::size_t period = 0;
    try {
      period = std::stoul(footer.substr(7));
    } catch (const std::exception&) {
      throw InvalidBetaSpec("dseq '" + name + "': bad repeat footer");
    }
    if (period == 0 || period > digits.size())
      throw InvalidBetaSpec("dseq '" + name + "': repeat period out of range");
    std::vector<int> head(digits.begin(), digits.end() - period);
    std::vector<int> tail(digits.end() - period, digits.end());
    return periodic(std::move(head), std::move(tail));
  }
  if (digits.empty()) throw InvalidBetaSpec("dseq '" + name + "': no digits");
  // A bare finite list has no defined tail; callers that need an infinite
  // sequence (the expansion of 1 is one) must reject this themselves.
  DigitStream s(std::make_shared<detail::PeriodicSource>(std::move(digits), std::vector<int>{0}));
  s.finite_padded_ = true;
  return s;
}

inline DigitStream DigitStream::from_dseq_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidBetaSpec("cannot open dseq file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_dseq_text(buf.str(), path);
}

}  // namespace betalab
