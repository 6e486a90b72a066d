#include "fence/strategies.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fence {

BoundsReport bounds(const std::vector<AgentSpec>& specs) {
  Rational total(0);
  for (const auto& s : specs) total += s.weighted_speed();
  return BoundsReport{total / Rational(2), total};
}

Rational ratio(const Schedule& s) { return bounds(specs_of(s)).ratio_of(s.fence_length); }

namespace {

std::vector<std::size_t> segment_order(const std::vector<AgentSpec>& specs, SegmentOrder order) {
  std::vector<std::size_t> idx(specs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (order == SegmentOrder::BySpeed) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (specs[a].speed() != specs[b].speed()) return specs[a].speed() < specs[b].speed();
      return specs[a].weight() < specs[b].weight();
    });
  }
  return idx;
}

}  // namespace

Schedule stretched_partition_schedule(const std::vector<AgentSpec>& specs, const Rational& length,
                                      SegmentOrder order) {
  if (specs.empty()) throw std::domain_error("partition: need at least one agent");
  if (length.sign() <= 0) throw std::domain_error("partition: fence length must be positive");
  const Rational total = bounds(specs).trivial_upper;

  struct Piece {
    std::size_t agent;
    Rational lo;
    Rational hi;
  };
  std::vector<Piece> pieces;
  Rational cursor(0);
  Rational period;
  for (std::size_t i : segment_order(specs, order)) {
    const Rational width = specs[i].weighted_speed() * length / total;
    pieces.push_back({i, cursor, cursor + width});
    cursor += width;
    const Rational round_trip = Rational(2) * width / specs[i].speed();
    period = period.is_zero() ? round_trip : rational_lcm(period, round_trip);
  }
  std::vector<Agent> agents;
  agents.reserve(pieces.size());
  for (const auto& piece : pieces) {
    const AgentSpec& spec = specs[piece.agent];
    agents.push_back({spec, zigzag(piece.lo, piece.hi, spec.speed(), Rational(0), period)});
  }
  return Schedule{length, period, std::move(agents)};
}

Schedule partition_schedule(const std::vector<AgentSpec>& specs, std::optional<Rational> length,
                            SegmentOrder order) {
  const BoundsReport b = bounds(specs);
  const Rational l = length.value_or(b.partition_length);
  if (l > b.partition_length) {
    throw std::domain_error("partition: length " + l.to_string() + " exceeds the partition bound " +
                            b.partition_length.to_string() + " = sum(v_i T_i) / 2");
  }
  return stretched_partition_schedule(specs, l, order);
}

std::vector<Agent> replicate_shifted(const AgentSpec& spec, const Trajectory& traj, std::size_t m) {
  if (m == 0) throw std::domain_error("replicate_shifted: m must be positive");
  const Rational share = spec.weight() / Rational(static_cast<long>(m));
  std::vector<Agent> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.push_back({AgentSpec(spec.speed(), share), time_shift(traj, share * Rational(static_cast<long>(j)))});
  }
  return out;
}

std::optional<Agent> collapse_shifted(const std::vector<Agent>& copies) {
  if (copies.empty()) return std::nullopt;
  const AgentSpec& first = copies.front().spec;
  const Trajectory& base = copies.front().trajectory;
  for (std::size_t j = 0; j < copies.size(); ++j) {
    const Agent& c = copies[j];
    if (c.spec != first) return std::nullopt;
    if (c.trajectory != time_shift(base, first.weight() * Rational(static_cast<long>(j)))) return std::nullopt;
  }
  return Agent{AgentSpec(first.speed(), first.weight() * Rational(static_cast<long>(copies.size()))), base};
}

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

Trajectory table(const Rational& period, std::initializer_list<std::pair<Rational, Rational>> pts) {
  std::vector<Breakpoint> bps;
  for (const auto& [t, x] : pts) bps.push_back({t, x});
  return Trajectory(period, std::move(bps));
}

// Speed 7/3: sweeps to the right end, three visits there at unit spacing,
// crosses to the left end, three visits there, and returns.
Trajectory fig1_fast_agent() {
  return table(q(7), {{q(0), q(7, 3)},
                      {q(1, 2), q(7, 2)},
                      {q(1), q(7, 3)},
                      {q(3, 2), q(7, 2)},
                      {q(2), q(7, 3)},
                      {q(5, 2), q(7, 2)},
                      {q(4), q(0)},
                      {q(9, 2), q(7, 6)},
                      {q(5), q(0)},
                      {q(11, 2), q(7, 6)},
                      {q(6), q(0)},
                      {q(7), q(7, 3)}});
}

// Speed 1/2: sweeps the two small triangles left uncovered near x = 4/3 and
// x = 13/6, resting at 7/6 in between.
Trajectory fig1_slow_agent() {
  return table(q(7), {{q(0), q(9, 5)},
                      {q(1), q(2)},
                      {q(5, 3), q(7, 3)},
                      {q(4), q(7, 6)},
                      {q(29, 6), q(7, 6)},
                      {q(11, 2), q(3, 2)},
                      {q(7), q(9, 5)}});
}

Trajectory full_fence_unit_zigzag() { return zigzag(q(0), q(7, 2), q(1), q(0), q(7)); }

}  // namespace

Schedule fig1_schedule() {
  std::vector<Agent> agents = replicate_shifted(AgentSpec(q(1), q(4)), full_fence_unit_zigzag(), 4);
  agents.push_back({AgentSpec(q(7, 3)), fig1_fast_agent()});
  agents.push_back({AgentSpec(q(1, 2)), fig1_slow_agent()});
  return Schedule{q(7, 2), q(7), std::move(agents)};
}

Schedule weighted_three_schedule() {
  std::vector<Agent> agents;
  agents.push_back({AgentSpec(q(1), q(4)), full_fence_unit_zigzag()});
  agents.push_back({AgentSpec(q(7, 3)), fig1_fast_agent()});
  agents.push_back({AgentSpec(q(1, 2)), fig1_slow_agent()});
  return Schedule{q(7, 2), q(7), std::move(agents)};
}

Schedule fig2_schedule() {
  const Rational period = q(10, 3);
  const Rational half = q(25, 3);
  const Rational length = q(50, 3);
  std::vector<Agent> agents;
  // Left group of three: zigzags over [0, 25/3], one unit apart in time.
  for (long j = 0; j < 3; ++j) {
    agents.push_back({AgentSpec(q(5)), zigzag(q(0), half, q(5), q(j), period)});
  }
  // Right group: mirror image of the left group about 25/3, delayed by 2/3.
  for (long j = 0; j < 3; ++j) {
    agents.push_back({AgentSpec(q(5)), zigzag(half, length, q(5), q(j) + q(7, 3), period)});
  }
  // Slow agents patch the triangles the groups leave at 0, 25/3 and 50/3.
  agents.push_back({AgentSpec(q(1)), zigzag(q(0), q(5, 6), q(1), q(7, 3), period)});
  agents.push_back({AgentSpec(q(1)), zigzag(q(15, 2), q(55, 6), q(1), q(1, 2), period)});
  agents.push_back({AgentSpec(q(1)), zigzag(q(95, 6), length, q(1), q(13, 6), period)});
  return Schedule{length, period, std::move(agents)};
}

Schedule extend_with_agent(const Schedule& s, const AgentSpec& spec) {
  const Rational added = spec.weighted_speed() / Rational(2);
  const Rational new_length = s.fence_length + added;
  const Rational new_period = rational_lcm(s.period, spec.weight());
  std::vector<Agent> agents;
  agents.reserve(s.agents.size() + 1);
  for (const auto& a : s.agents) {
    agents.push_back({a.spec, a.trajectory.period() == new_period ? a.trajectory
                                                                   : a.trajectory.with_period(new_period)});
  }
  agents.push_back({spec, zigzag(s.fence_length, new_length, spec.speed(), Rational(0), new_period)});
  return Schedule{new_length, new_period, std::move(agents)};
}

}  // namespace fence
