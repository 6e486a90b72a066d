#include <gtest/gtest.h>

#include "fence/coverage.hpp"
#include "fence/strategies.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using fence::AgentSpec;
using fence::Arc;
using fence::ArcSet;
using fence::Rational;
using fence::Schedule;
using fence::Verdict;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

Schedule single(const Rational& hi, const Rational& period, const Rational& weight = Rational(1)) {
  return Schedule{hi, period, {{AgentSpec(q(1), weight), fence::zigzag(q(0), hi, q(1), q(0), period)}}};
}

void expect_confirmed_failure(const Schedule& s, const Verdict& v) {
  ASSERT_FALSE(v.patrols());
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_GT(v.uncovered_area, q(0));
  EXPECT_FALSE(v.regions.empty());
  EXPECT_FALSE(fence::testing::covered_by_definition(s, v.witness->x, v.witness->t_star))
      << "witness x=" << v.witness->x << " t*=" << v.witness->t_star;
}

}  // namespace

TEST(ArcSet, UnionAndComplement) {
  const ArcSet a = ArcSet::from_arcs(q(4), {{q(3), q(5)}, {q(1, 2), q(1)}, {q(1), q(2)}});
  ASSERT_EQ(a.arcs().size(), 1u);
  EXPECT_EQ(a.arcs()[0], (Arc{q(3), q(6)}));
  EXPECT_EQ(a.measure(), q(3));
  EXPECT_TRUE(a.contains(q(0)));
  EXPECT_TRUE(a.contains(q(2)));
  EXPECT_FALSE(a.contains(q(3)));  // half-open at the start
  const ArcSet gap = a.complement();
  ASSERT_EQ(gap.arcs().size(), 1u);
  EXPECT_EQ(gap.arcs()[0], (Arc{q(2), q(3)}));
  EXPECT_TRUE(ArcSet::from_arcs(q(1), {{q(0), q(1)}}).full());
  EXPECT_TRUE(ArcSet::from_arcs(q(2), {}).complement().full());
  EXPECT_TRUE(ArcSet::full_circle(q(2)).complement().empty());
}

TEST(CoverageArcs, Examples) {
  EXPECT_TRUE(fence::coverage_arcs(single(q(1, 2), q(1)), q(0)).full());

  const ArcSet gap = fence::coverage_arcs(single(q(3, 5), q(6, 5)), q(0));
  ASSERT_EQ(gap.arcs().size(), 1u);
  EXPECT_EQ(gap.arcs()[0], (Arc{q(0), q(1)}));
  EXPECT_EQ(gap.complement().arcs()[0], (Arc{q(1), q(6, 5)}));

  const auto z = fence::zigzag(q(0), q(1, 2), q(1), q(0), q(1));
  const Schedule pair{q(1), q(1), {{AgentSpec(q(1)), z}, {AgentSpec(q(1)), fence::reflect(z, q(1))}}};
  EXPECT_TRUE(fence::coverage_arcs(pair, q(1, 2)).full());

  EXPECT_THROW((void)fence::coverage_arcs(pair, q(2)), std::domain_error);
  EXPECT_THROW((void)fence::coverage_arcs(pair, q(-1, 10)), std::domain_error);
}

TEST(CoverageArcs, HalfOpenSemantics) {
  // Visits to x = 0 at times 0, 6/5, ... cover (0, 1] each period.
  const ArcSet a = fence::coverage_arcs(single(q(3, 5), q(6, 5)), q(0));
  EXPECT_TRUE(a.contains(q(1)));
  EXPECT_FALSE(a.contains(q(0)));
  EXPECT_FALSE(a.contains(q(11, 10)));
  // A gap of exactly T is still covered: (t, t + T] is closed on the right.
  EXPECT_TRUE(fence::verify(single(q(1, 2), q(1))).patrols());
  EXPECT_FALSE(fence::verify(single(q(1, 2), q(1), q(99, 100))).patrols());
}

TEST(CriticalPositions, Examples) {
  const auto single_cp = fence::critical_positions(single(q(1, 2), q(1)));
  EXPECT_EQ(single_cp.front(), q(0));
  EXPECT_EQ(single_cp.back(), q(1, 2));

  const auto part = fence::critical_positions(fence::partition_schedule({AgentSpec(q(1)), AgentSpec(q(1))}));
  for (const Rational& x : {q(0), q(1, 2), q(1)}) {
    EXPECT_TRUE(std::find(part.begin(), part.end(), x) != part.end()) << x;
  }
  EXPECT_TRUE(std::is_sorted(part.begin(), part.end()));
  EXPECT_TRUE(std::adjacent_find(part.begin(), part.end()) == part.end());
}

TEST(CriticalPositions, QuadraticSizeBound) {
  fence::testing::Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const Schedule s = fence::testing::random_mixed_schedule(rng);
    std::size_t m = 0;
    Rational max_weight(0);
    for (const auto& a : s.agents) {
      m += a.trajectory.segment_count();
      max_weight = max(max_weight, a.spec.weight());
    }
    // Each pair of segments meets each of four offsets at most
    // (1 + number of period wraps) times.
    const long wraps = 3 + (max_weight / s.period).ceil().get_si();
    const std::size_t bound = 2 + m + 4 * m * m * static_cast<std::size_t>(wraps);
    EXPECT_LE(fence::critical_positions(s).size(), bound);
  }
}

TEST(Verify, PartitionAtBoundPatrols) {
  const std::vector<AgentSpec> specs{AgentSpec(q(1)), AgentSpec(q(1)),    AgentSpec(q(1)),
                                     AgentSpec(q(1)), AgentSpec(q(7, 3)), AgentSpec(q(1, 2))};
  const Schedule s = fence::partition_schedule(specs, q(41, 12));
  const Verdict v = fence::verify(s);
  EXPECT_TRUE(v.patrols());
  EXPECT_FALSE(v.witness.has_value());
  EXPECT_EQ(v.uncovered_area, q(0));
  EXPECT_TRUE(v.regions.empty());

  const Schedule stretched = fence::stretched_partition_schedule(specs, q(41, 12) + q(1, 100));
  expect_confirmed_failure(stretched, fence::verify(stretched));
}

TEST(Verify, Fig1Patrols) { EXPECT_TRUE(fence::verify(fence::fig1_schedule()).patrols()); }

TEST(Verify, RejectsInvalidSchedules) {
  Schedule s = single(q(1, 2), q(1));
  s.fence_length = q(1, 4);
  EXPECT_THROW((void)fence::verify(s), fence::InvalidSchedule);
}

TEST(Verify, UncoveredAreaOfSingleSlowAgent) {
  // Zigzag over [0, 1] with period 2, T = 1. At x the visit gaps are 2x and
  // 2 - 2x; the uncovered time is max(0, 2x - 1) + max(0, 1 - 2x) = |2x - 1|.
  // Integrating over [0, 1] gives 1/2.
  const Verdict v = fence::verify(single(q(1), q(2)));
  EXPECT_EQ(v.uncovered_area, q(1, 2));
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->x, q(0));
}

TEST(Verify, StatusInvariantsHold) {
  fence::testing::Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const Schedule s = fence::testing::random_mixed_schedule(rng);
    const Verdict v = fence::verify(s);
    EXPECT_EQ(v.patrols(), v.uncovered_area.is_zero());
    EXPECT_EQ(v.patrols(), v.regions.empty());
    EXPECT_EQ(v.patrols(), !v.witness.has_value());
    if (!v.patrols()) expect_confirmed_failure(s, v);
  }
}

TEST(Verify, AgreesWithGridOracle) {
  fence::testing::Rng rng(99);
  int patrols = 0;
  for (int i = 0; i < 40; ++i) {
    const Schedule s = fence::testing::random_mixed_schedule(rng);
    const Verdict v = fence::verify(s);
    if (v.patrols()) {
      ++patrols;
      EXPECT_EQ(fence::testing::grid_oracle(s, 250, 250).uncovered, 0u);
    } else {
      expect_confirmed_failure(s, v);
    }
  }
  EXPECT_GT(patrols, 5);
}

TEST(Verify, GridOracleDetectsKnownGap) {
  const auto report = fence::testing::grid_oracle(single(q(3, 5), q(6, 5)), 7, 12);
  EXPECT_GT(report.uncovered, 0u);
  ASSERT_TRUE(report.first.has_value());
  EXPECT_FALSE(fence::testing::covered_by_definition(single(q(3, 5), q(6, 5)), report.first->first,
                                                     report.first->second));
}

TEST(Verify, MonotoneInWeights) {
  fence::testing::Rng rng(4);
  for (int i = 0; i < 60; ++i) {
    const Schedule s = fence::testing::random_mixed_schedule(rng);
    if (!fence::verify(s).patrols()) continue;
    for (const Rational& c : {q(1001, 1000), q(3, 2), q(3)}) {
      EXPECT_TRUE(fence::verify(fence::testing::scale_weights(s, c)).patrols());
    }
  }
}

TEST(Verify, InvariantUnderSymmetries) {
  fence::testing::Rng rng(77);
  for (int i = 0; i < 40; ++i) {
    const Schedule s = fence::testing::random_mixed_schedule(rng);
    const Verdict v = fence::verify(s);
    const Rational c(1 + static_cast<long>(rng.below(5)), 1 + static_cast<long>(rng.below(3)));
    const Rational delta = s.period * Rational(static_cast<long>(rng.below(13)), 7);

    const Verdict reflected = fence::verify(fence::testing::reflect_schedule(s));
    EXPECT_EQ(reflected.status, v.status);
    EXPECT_EQ(reflected.uncovered_area, v.uncovered_area);

    const Verdict shifted = fence::verify(fence::testing::shift_schedule(s, delta));
    EXPECT_EQ(shifted.status, v.status);
    EXPECT_EQ(shifted.uncovered_area, v.uncovered_area);

    const Verdict spaced = fence::verify(fence::testing::scale_space_schedule(s, c));
    EXPECT_EQ(spaced.status, v.status);
    EXPECT_EQ(spaced.uncovered_area, v.uncovered_area * c);

    const Verdict timed = fence::verify(fence::testing::scale_time_schedule(s, c));
    EXPECT_EQ(timed.status, v.status);
    EXPECT_EQ(timed.uncovered_area, v.uncovered_area * c);
  }
}

TEST(Verify, ReplicationPreservesVerdict) {
  fence::testing::Rng rng(12);
  for (int i = 0; i < 40; ++i) {
    const Schedule s = fence::testing::random_mixed_schedule(rng);
    const std::size_t m = 2 + rng.below(3);
    std::vector<fence::Agent> agents(s.agents.begin() + 1, s.agents.end());
    const fence::Agent& first = s.agents.front();
    const AgentSpec heavy(first.spec.speed(), first.spec.weight() * Rational(static_cast<long>(m)));
    // m copies of weight T shifted by T cover what one agent of weight mT covers.
    for (auto& copy : fence::replicate_shifted(heavy, first.trajectory, m)) agents.push_back(std::move(copy));
    Schedule with_copies = fence::make_schedule(s.fence_length, agents);
    Schedule with_heavy = s;
    with_heavy.agents.front().spec = heavy;
    const Verdict a = fence::verify(with_copies);
    const Verdict b = fence::verify(with_heavy);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.uncovered_area, b.uncovered_area);
  }
}

// No schedule patrols a fence longer than the sum of v_i T_i.
TEST(Verify, TrivialUpperBoundHoldsOnThousandCases) {
  fence::testing::Rng rng(1000);
  const auto cases = fence::testing::upper_bound_cases(rng, 1000);
  std::size_t failures_confirmed = 0;
  for (const auto& s : cases) {
    ASSERT_GT(s.fence_length, fence::testing::weighted_speed_sum(s));
    ASSERT_TRUE(fence::validate_schedule(s).empty());
    const Verdict v = fence::verify(s);
    ASSERT_FALSE(v.patrols()) << "certified beyond the trivial bound";
    if (!fence::testing::covered_by_definition(s, v.witness->x, v.witness->t_star)) ++failures_confirmed;
  }
  EXPECT_EQ(failures_confirmed, cases.size());
}

TEST(IdleProfile, Examples) {
  const auto single_profile = fence::idle_profile(single(q(1, 2), q(1)));
  ASSERT_TRUE(single_profile.global_max.has_value());
  EXPECT_EQ(*single_profile.global_max, q(1));
  EXPECT_EQ(single_profile.argmax_x, q(0));

  const auto part = fence::idle_profile(fence::partition_schedule({AgentSpec(q(1)), AgentSpec(q(2))}));
  EXPECT_EQ(part.global_max, q(1));

  const auto slow = fence::idle_profile(single(q(3, 5), q(6, 5)));
  EXPECT_EQ(slow.global_max, q(6, 5));
  EXPECT_TRUE(slow.argmax_x == q(0) || slow.argmax_x == q(3, 5));
}

TEST(IdleProfile, RejectsUnequalWeights) {
  EXPECT_THROW((void)fence::idle_profile(fence::weighted_three_schedule()), std::domain_error);
}

TEST(IdleProfile, UnvisitedPositionIsUnbounded) {
  Schedule s = single(q(1, 2), q(1));
  s.fence_length = q(1);
  const auto p = fence::idle_profile(s);
  EXPECT_FALSE(p.global_max.has_value());
  EXPECT_GT(p.argmax_x, q(1, 2));
}

TEST(IdleProfile, AgreesWithVerify) {
  fence::testing::Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    Schedule s = fence::testing::random_mixed_schedule(rng);
    const Rational w = s.agents.front().spec.weight();
    for (auto& a : s.agents) a.spec = AgentSpec(a.spec.speed(), w);
    const auto p = fence::idle_profile(s);
    const bool within = p.global_max.has_value() && *p.global_max <= w;
    EXPECT_EQ(within, fence::verify(s).patrols());
  }
}
