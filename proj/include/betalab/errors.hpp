// errors.hpp -- exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace betalab {

struct Error : std::runtime_error {
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind(std::move(kind)) {}
  std::string kind;
};

struct InvalidBetaSpec : Error {
  explicit InvalidBetaSpec(const std::string& what) : Error("InvalidBetaSpec", what) {}
};

// Raised when a sign/ceiling decision cannot be made within the refinement
// budget and no exactness certificate is available. `ambiguous_integer` carries
// the integer the enclosure straddles, when that is what blocked the decision.
struct PrecisionExhausted : Error {
  explicit PrecisionExhausted(const std::string& what, long long ambiguous = 0,
                              bool has_ambiguous = false)
      : Error("PrecisionExhausted", what),
        ambiguous_integer(ambiguous),
        has_ambiguous_integer(has_ambiguous) {}
  long long ambiguous_integer;
  bool has_ambiguous_integer;
};

struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& what) : Error("BudgetExceeded", what) {}
};

struct NotAdmissible : Error {
  explicit NotAdmissible(const std::string& what) : Error("NotAdmissible", what) {}
};

struct NotSelfAdmissible : Error {
  explicit NotSelfAdmissible(const std::string& what) : Error("NotSelfAdmissible", what) {}
};

struct ScheduleInfeasible : Error {
  explicit ScheduleInfeasible(const std::string& what) : Error("ScheduleInfeasible", what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

struct ConfigParseError : Error {
  ConfigParseError(const std::string& what, int line)
      : Error("ConfigParseError", what + " (line " + std::to_string(line) + ")"),
        line(line) {}
  int line;
};

struct EmptyTail : Error {
  explicit EmptyTail(const std::string& what) : Error("EmptyTail", what) {}
};

struct AssertionFailure : Error {
  explicit AssertionFailure(const std::string& what) : Error("AssertionFailure", what) {}
};

}  // namespace betalab
