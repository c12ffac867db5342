// Density traces, finite-sample summaries, the closed-form spectrum, and the
// spike construction pipeline (schedule -> point -> trace -> verification).

#include <doctest.h>

#include <cmath>

#include "betalab/irregularity.hpp"

using namespace betalab;

namespace {

Beta two() { return Beta::parse("dec:2"); }
Beta golden() { return Beta::parse("poly:-1,-1,1@[1/1,2/1]"); }
Beta doubling() { return Beta::from_one_expansion(DigitStream::doubling_runs(), "dseq:doubling-runs"); }

}  // namespace

TEST_CASE("spectrum dimension closed form") {
  CHECK(spectrum_dim(1.0, 2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(spectrum_dim(1.0, 1.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(spectrum_dim(2.0, 3.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(spectrum_dim(1.0, 1.0 + 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  // Strictly decreasing in delta on (1, 1+lambda].
  double prev = 2;
  for (double d = 1.1; d < 2.0; d += 0.1) {
    double v = spectrum_dim(1.0, d);
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(spectrum_dim(0.0, 1.5), DomainError);
  CHECK_THROWS_AS(spectrum_dim(-1.0, 1.5), DomainError);
  CHECK_THROWS_AS(spectrum_dim(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(spectrum_dim(1.0, 2.5), DomainError);
}

TEST_CASE("density trace of a full base is identically 1") {
  Beta b = two();
  DensityTrace trace = density_trace(b, b.constant(Rational(1, 2)), 30);
  REQUIRE(trace.records.size() == 30);
  for (const auto& rec : trace.records) {
    CHECK(rec.d_lo == 1.0);
    CHECK(rec.d_hi == 1.0);
    CHECK(rec.fullness == Fullness::Full);
    CHECK(rec.bracket_ok);
    CHECK(rec.t_aux == 0);
  }
}

TEST_CASE("density trace of x = 1 under the golden base") {
  Beta g = golden();
  DensityTrace trace = density_trace(g, g.constant(Rational(1)), 12);
  for (const auto& rec : trace.records) {
    CHECK(rec.k_star == 0);  // the expansion of 1 matches itself
    CHECK(rec.bracket_ok);
    CHECK(rec.t_aux <= rec.gamma);
    if (rec.n % 2 == 0) {
      CHECK(rec.fullness == Fullness::Full);
      CHECK(rec.d_lo == 1.0);
      CHECK(rec.d_hi == 1.0);
    } else {
      CHECK(rec.fullness == Fullness::NotFull);
      // d_n is bracketed by (n+t)/n and (n+t+1)/n with t = 1 at odd n.
      double lo_target = double(rec.n + 1) / double(rec.n);
      double hi_target = double(rec.n + 2) / double(rec.n);
      CHECK(rec.d_hi >= lo_target - 1e-6);
      CHECK(rec.d_lo <= hi_target + 1e-6);
    }
  }
  CHECK(trace.at(1).d_lo == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("density trace input validation") {
  Beta g = golden();
  CHECK_THROWS_AS(density_trace(g, g.constant(Rational(1)), 0), DomainError);
  DigitStream bad = DigitStream::periodic({1, 1}, {0});
  CHECK_THROWS_AS(density_trace(g, bad, 5), NotAdmissible);
}

TEST_CASE("density summary on a trivial trace") {
  Beta b = two();
  DensityTrace trace = density_trace(b, b.constant(Rational(1, 2)), 20);
  DensitySummary s = density_summary(trace, 5, 0.1);
  CHECK(s.tail_count == 16);
  CHECK(s.d_lower == 1.0);
  CHECK(s.d_upper == 1.0);
  CHECK(s.tau_hat == 0.0);
  CHECK(s.lemma_gap == doctest::Approx(0.0));
  CHECK(s.brackets_exact);
  CHECK(s.coverage_ok);
  CHECK_THROWS_AS(density_summary(trace, 5, 0.0), DomainError);
  CHECK_THROWS_AS(density_summary(trace, 21, 0.1), EmptyTail);
}

TEST_CASE("schedule oracles for the doubling-runs base") {
  Beta dr = doubling();
  ConstructionSchedule s4 = schedule(dr, {1}, 2, 4, 200);
  REQUIRE(s4.blocks.size() == 2);
  CHECK(s4.blocks[0].m == 20);
  CHECK(s4.blocks[0].t == 16);
  CHECK(s4.blocks[0].h == 3);
  CHECK(s4.blocks[0].n == 23);
  CHECK(s4.blocks[0].end == 40);
  CHECK(s4.blocks[1].m == 160);
  CHECK(s4.blocks[1].t == 103);
  CHECK(s4.total_length == 304);
  CHECK(s4.lambda_hat == Rational(1));
  CHECK_FALSE(s4.lambda_zero);

  // The greedy per-block optimum (m1 = 264) would strand block 2 above the
  // cap; the search must back off to a feasible ratio sequence.
  ConstructionSchedule s10 = schedule(dr, {1}, 2, 10, 400);
  REQUIRE(s10.blocks.size() == 2);
  CHECK(s10.blocks[0].m == 30);
  CHECK(s10.blocks[0].t == 6);
  CHECK(s10.blocks[1].m == 400);
  CHECK(s10.blocks[1].t == 120);
  CHECK(s10.total_length == 561);
  for (const auto& blk : s10.blocks) CHECK(blk.m >= 10 * blk.h);
}

TEST_CASE("schedule validation and infeasibility") {
  Beta dr = doubling();
  CHECK_THROWS_AS(schedule(dr, {1}, 3, 10, 60), ScheduleInfeasible);
  CHECK_THROWS_AS(schedule(dr, {1}, 0, 10, 100), DomainError);
  CHECK_THROWS_AS(schedule(dr, {1}, 2, 0, 100), DomainError);
  CHECK_THROWS_AS(schedule(dr, {}, 2, 4, 100), DomainError);
  CHECK_THROWS_AS(schedule(dr, std::vector<int>(300, 0), 1, 1, 200), DomainError);
  CHECK_THROWS_AS(schedule(golden(), {1, 1}, 2, 4, 100), NotAdmissible);
}

TEST_CASE("spike construction end to end on the golden base") {
  Beta g = golden();
  ConstructionSchedule sched = schedule(g, {1}, 2, 4, 200);
  REQUIRE(sched.blocks.size() == 2);
  CHECK(sched.blocks[0].m == 13);
  CHECK(sched.blocks[0].h == 3);
  CHECK(sched.blocks[1].m == 73);
  CHECK(sched.blocks[1].h == 18);
  CHECK(sched.total_length == 93);

  IrregularPoint point = build_irregular(g, sched);
  CHECK(point.prefix_length == 93);
  CHECK(is_admissible(g, point.stream.prefix(93)));

  // The point lies in the seed cylinder: 0 < y - value(seed) <= beta^-ell.
  Value diff = point.value - word_value(g, sched.seed);
  CHECK(diff.compare(Rational(0)) > 0);
  CHECK(diff.compare(g.constant(Rational(1)).times_beta_pow(
            -static_cast<long>(sched.seed.size()))) <= 0);

  DensityTrace trace = density_trace(g, point.stream, sched.total_length);
  SpikeReport report = verify_spike(g, sched, trace);
  REQUIRE(report.checks.size() == 2);
  for (const auto& c : report.checks) {
    CHECK(c.bracket_ok);
    CHECK(c.full_ok);
    CHECK(c.d_hi >= c.target_lo - 1e-9);
    CHECK(c.d_lo <= c.target_hi + 1e-9);
  }
  CHECK(report.spike_target == doctest::Approx(2.0));
}

TEST_CASE("verify_spike detects a corrupted trace") {
  Beta g = golden();
  ConstructionSchedule sched = schedule(g, {1}, 2, 4, 200);
  IrregularPoint point = build_irregular(g, sched);
  DensityTrace trace = density_trace(g, point.stream, sched.total_length);

  DensityTrace corrupt = trace;
  DensityRecord& rec = corrupt.records[sched.blocks[0].n - 1];
  rec.length = rec.length.times_beta_pow(-5);
  CHECK_THROWS_AS(verify_spike(g, sched, corrupt), AssertionFailure);

  DensityTrace short_trace = trace;
  short_trace.records.resize(sched.total_length - 1);
  CHECK_THROWS_AS(verify_spike(g, sched, short_trace), DomainError);

  ConstructionSchedule empty;
  empty.base = g;
  CHECK_THROWS_AS(verify_spike(g, empty, trace), DomainError);
  CHECK_THROWS_AS(build_irregular(g, empty), DomainError);

  ConstructionSchedule broken = sched;
  broken.blocks[0].h += 1;
  CHECK_THROWS_AS(build_irregular(g, broken), DomainError);
}

TEST_CASE("build_irregular encloses the exact point") {
  Beta g = golden();
  ConstructionSchedule sched = schedule(g, {1}, 1, 4, 60);
  IrregularPoint point = build_irregular(g, sched);
  CHECK(point.enclosure.width() <= pow2(-64));
  CHECK(point.value.compare(point.enclosure.lo) >= 0);
  CHECK(point.value.compare(point.enclosure.hi) <= 0);
  // Right endpoint of the final full cylinder.
  Value left = word_value(g, point.stream.prefix(point.prefix_length));
  Value len = g.constant(Rational(1)).times_beta_pow(-static_cast<long>(point.prefix_length));
  CHECK(point.value.compare(left + len) == 0);
}
