// Certified base construction and Value arithmetic: parsing, quotient-ring
// exactness, enclosure refinement, and the precision-failure modes.

#include <doctest.h>

#include "betalab/reals.hpp"

using namespace betalab;

namespace {

Beta golden() { return Beta::parse("poly:-1,-1,1@[1/1,2/1]"); }
Beta doubling() { return Beta::from_one_expansion(DigitStream::doubling_runs(), "dseq:doubling-runs"); }

}  // namespace

TEST_CASE("rational interval arithmetic") {
  RatInterval a(Rational(1), Rational(2)), b(Rational(3), Rational(4));
  RatInterval s = a + b;
  CHECK(s.lo == 4);
  CHECK(s.hi == 6);
  RatInterval d = a - b;
  CHECK(d.lo == -3);
  CHECK(d.hi == -1);
  RatInterval m = RatInterval(Rational(-2), Rational(3)) * RatInterval(Rational(-1), Rational(5));
  CHECK(m.lo == -10);  // 3 * -1 vs -2 * 5
  CHECK(m.hi == 15);
  CHECK_THROWS_AS(rat_inv(RatInterval(Rational(-1), Rational(1))), DomainError);
  RatInterval inv = rat_inv(RatInterval(Rational(2), Rational(4)));
  CHECK(inv.lo == Rational(1, 4));
  CHECK(inv.hi == Rational(1, 2));
  RatInterval p = rat_pow(RatInterval(Rational(2), Rational(2)), 10, 64);
  CHECK(p.contains(Rational(1024)));
}

TEST_CASE("directed rounding") {
  Rational q(1, 3);
  CHECK(round_down(q, 4) <= q);
  CHECK(round_up(q, 4) >= q);
  CHECK(round_up(q, 4) - round_down(q, 4) <= pow2(-4));
  CHECK(round_down(Rational(5, 8), 3) == Rational(5, 8));  // already dyadic
  CHECK(round_down(Rational(-1, 3), 2) == Rational(-2, 4));
}

TEST_CASE("rational and decimal parsing") {
  CHECK(parse_rational("7/4") == Rational(7, 4));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK_THROWS_AS(parse_rational("abc"), DomainError);
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
  CHECK_THROWS_AS(parse_rational(""), DomainError);
  CHECK(parse_decimal("1.25") == Rational(5, 4));
  CHECK(parse_decimal("2") == Rational(2));
  CHECK_THROWS_AS(parse_decimal("1.2.3"), DomainError);
  CHECK_THROWS_AS(parse_decimal("1e3"), DomainError);
}

TEST_CASE("log of huge rationals") {
  double ln2 = 0.6931471805599453;
  CHECK(rat_log(Rational(2)) == doctest::Approx(ln2).epsilon(1e-12));
  CHECK(rat_log(Rational(Int(1) << 100, 1)) == doctest::Approx(100 * ln2).epsilon(1e-12));
  CHECK(rat_log(Rational(1, 8)) == doctest::Approx(-3 * ln2).epsilon(1e-12));
  CHECK_THROWS_AS(rat_log(Rational(0)), DomainError);
  CHECK_THROWS_AS(rat_log(Rational(-2)), DomainError);
}

TEST_CASE("base parsing accepts the three spec kinds") {
  Beta two = Beta::parse("dec:2");
  CHECK(two.exact());
  CHECK(two.alphabet_size() == 2);
  CHECK(two.value().compare(Rational(2)) == 0);

  Beta g = golden();
  CHECK(g.exact());
  CHECK(g.alphabet_size() == 2);
  CHECK(g.spec_string() == "poly:-1,-1,1@[1/1,2/1]");

  Beta dr = doubling();
  CHECK_FALSE(dr.exact());
  CHECK(dr.alphabet_size() == 2);
}

TEST_CASE("base parsing rejects malformed specs") {
  CHECK_THROWS_AS(Beta::parse("dec:1"), InvalidBetaSpec);
  CHECK_THROWS_AS(Beta::parse("dec:0.5"), InvalidBetaSpec);
  CHECK_THROWS_AS(Beta::parse("dec:x"), InvalidBetaSpec);
  CHECK_THROWS_AS(Beta::parse("nope:2"), InvalidBetaSpec);
  // x^2 + 1: no real root, no sign change.
  CHECK_THROWS_AS(Beta::parse("poly:1,0,1@[1,2]"), InvalidBetaSpec);
  // (x-1)(x-2)(x-3): sign change over [1/2,7/2] but three roots inside.
  CHECK_THROWS_AS(Beta::parse("poly:-6,11,-6,1@[1/2,7/2]"), InvalidBetaSpec);
  // Empty and endpoint-root intervals.
  CHECK_THROWS_AS(Beta::parse("poly:-1,-1,1@[2,1]"), InvalidBetaSpec);
  CHECK_THROWS_AS(Beta::parse("poly:-2,1@[2,3]"), InvalidBetaSpec);
  CHECK_THROWS_AS(Beta::parse("poly:-1,-1,1@[1,2"), InvalidBetaSpec);
  // Degree-0 after trimming.
  CHECK_THROWS_AS(Beta::parse("poly:5@[1,2]"), InvalidBetaSpec);
}

TEST_CASE("algebraic arithmetic is exact in the quotient ring") {
  Beta g = golden();
  Value b = g.value();
  CHECK((b * b - b).compare(Rational(1)) == 0);  // beta^2 = beta + 1
  CHECK((b * b - b - Rational(1)).is_zero());
  CHECK(b.certified_ceil() == 2);
  CHECK((b * b).certified_ceil() == 3);
  CHECK((b * b).certified_floor() == 2);
  CHECK(b.compare(Rational(3, 2)) == 1);
  CHECK(b.compare(Rational(5, 3)) == -1);
  // 1/beta = beta - 1 under the golden relation.
  Value inv = g.constant(Rational(1)).times_beta_pow(-1);
  CHECK(inv.compare(b - Rational(1)) == 0);
}

TEST_CASE("enclosures nest and reach the requested width") {
  Beta dr = doubling();
  RealEnclosure wide = dr.refine(pow2(-10));
  RealEnclosure narrow = dr.refine(pow2(-100));
  CHECK(narrow.width() <= pow2(-100));
  CHECK(wide.lo <= narrow.lo);
  CHECK(narrow.hi <= wide.hi);
  CHECK(rat_double(narrow.lo) == doctest::Approx(1.5453442876425332).epsilon(1e-12));
  // The refinement budget is finite.
  CHECK_THROWS_AS(dr.refine(pow2(-5000)), BudgetExceeded);
}

TEST_CASE("one-expansion bases: periodic tails become exact") {
  // 1 = sum beta^-i  <=>  beta = 2.
  Beta two = Beta::from_one_expansion(DigitStream::periodic({}, {1}));
  CHECK(two.exact());
  CHECK(two.value().compare(Rational(2)) == 0);

  // (1,0)^inf gives the golden ratio: beta^2 = beta + 1 must hold exactly.
  Beta g = Beta::from_one_expansion(DigitStream::periodic({}, {1, 0}));
  CHECK(g.exact());
  Value b = g.value();
  CHECK((b * b - b - Rational(1)).is_zero());
  // Its enclosure agrees with the polynomial-spec golden base.
  RealEnclosure e1 = g.refine(pow2(-40));
  RealEnclosure e2 = golden().refine(pow2(-40));
  CHECK(e1.lo <= e2.hi);
  CHECK(e2.lo <= e1.hi);
}

TEST_CASE("one-expansion bases: invalid digit data is rejected") {
  CHECK_THROWS_AS(Beta::from_one_expansion(DigitStream::periodic({}, {0, 1})),
                  NotSelfAdmissible);  // first digit must be >= 1
  CHECK_THROWS_AS(Beta::from_one_expansion(DigitStream::periodic({1}, {2})),
                  NotSelfAdmissible);  // shifted tail 2,2,... beats the sequence
  CHECK_THROWS_AS(Beta::from_one_expansion(DigitStream::periodic({1}, {0})),
                  InvalidBetaSpec);  // eventually zero
  CHECK_THROWS_AS(
      Beta::from_one_expansion(DigitStream::from_dseq_text("1,0,1", "inline")),
      InvalidBetaSpec);  // finite list, no tail rule
}

TEST_CASE("series-base comparisons fail loudly instead of silently") {
  Beta dr = doubling();
  Value b = dr.value();
  // A rational planted inside the deepest refinable bracket can never be
  // separated from beta.
  RatInterval deep = b.enclosure_bits(BetaImpl::kDefaultMaxBits);
  CHECK(deep.width() > 0);
  Rational probe = (deep.lo + deep.hi) / 2;
  CHECK_THROWS_AS(b.compare(probe), PrecisionExhausted);
  // Same situation at an integer boundary: the ceiling is ambiguous and the
  // error reports which integer was in play.
  Value straddle = b - probe + Rational(1);
  try {
    straddle.certified_ceil();
    CHECK_MESSAGE(false, "expected PrecisionExhausted");
  } catch (const PrecisionExhausted& e) {
    CHECK(e.has_ambiguous_integer);
    CHECK(e.ambiguous_integer == 1);
  }
}

TEST_CASE("value normalization keeps certificates recognizable") {
  Beta dr = doubling();
  Value b = dr.value();
  // beta * beta^-1 cancels syntactically even for a series base.
  CHECK(b.times_beta_pow(-1).times_beta_pow(1).compare(b) == 0);
  Value one = dr.constant(Rational(1)).times_beta_pow(-1) * b;
  CHECK(one.compare(Rational(1)) == 0);
  // (beta + 1)/beta - 1/beta reduces to the constant 1 without refinement.
  Value lhs = (b + Rational(1)).times_beta_pow(-1) - dr.constant(Rational(1)).times_beta_pow(-1);
  CHECK(lhs.compare(Rational(1)) == 0);
  CHECK_THROWS_AS(Value(dr.impl(), {Rational(1)}, -1), DomainError);
}

TEST_CASE("values over different bases do not mix") {
  Beta g = golden();
  Beta two = Beta::parse("dec:2");
  CHECK_THROWS_AS(g.value() + two.value(), DomainError);
  CHECK_THROWS_AS(g.value() * two.value(), DomainError);
}

TEST_CASE("enclosure interface rejects nonsense widths") {
  Beta g = golden();
  CHECK_THROWS_AS(g.value().enclosure(Rational(0)), DomainError);
  CHECK_THROWS_AS(g.value().enclosure(Rational(-1)), DomainError);
  RealEnclosure e = g.value().enclosure(pow2(-80));
  CHECK(e.width() <= pow2(-80));
  CHECK(e.lo > Rational(8, 5));
  CHECK(e.hi < Rational(13, 8));
}
