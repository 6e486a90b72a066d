#pragma once

// Schedule constructors and length bounds.

#include <optional>
#include <vector>

#include "fence/rational.hpp"
#include "fence/schedule.hpp"

namespace fence {

struct BoundsReport {
  Rational partition_length;  ///< sum(v_i T_i) / 2
  Rational trivial_upper;     ///< sum(v_i T_i)

  [[nodiscard]] Rational ratio_of(const Rational& length) const { return length / trivial_upper; }
};

[[nodiscard]] BoundsReport bounds(const std::vector<AgentSpec>& specs);

/// fence_length / sum(v_i T_i).
[[nodiscard]] Rational ratio(const Schedule& s);

enum class SegmentOrder {
  Input,    ///< segments tile the fence in the order the agents are given
  BySpeed,  ///< ascending speed, then weight; input order breaks ties
};

/// Each agent zigzags at full speed over its own segment, of length
/// proportional to v_i T_i; segments tile [0, l] left to right. Defaults to
/// the largest patrollable length sum(v_i T_i) / 2. Throws std::domain_error
/// when l exceeds that bound or is not positive.
[[nodiscard]] Schedule partition_schedule(const std::vector<AgentSpec>& specs,
                                          std::optional<Rational> length = std::nullopt,
                                          SegmentOrder order = SegmentOrder::Input);

/// Same layout without the length check. Above the bound the round trips
/// exceed the weights, so the result is valid but does not patrol.
[[nodiscard]] Schedule stretched_partition_schedule(const std::vector<AgentSpec>& specs,
                                                    const Rational& length,
                                                    SegmentOrder order = SegmentOrder::Input);

/// m copies of one agent, each with weight T/m, copy j shifted in time by j T/m.
/// Throws std::domain_error when m == 0.
[[nodiscard]] std::vector<Agent> replicate_shifted(const AgentSpec& spec, const Trajectory& traj,
                                                   std::size_t m);

/// Inverse of replicate_shifted: returns the single heavier agent when
/// `copies` is exactly such a family, nullopt otherwise.
[[nodiscard]] std::optional<Agent> collapse_shifted(const std::vector<Agent>& copies);

/// Six unit-weight agents with speeds 1, 1, 1, 1, 7/3, 1/2 patrolling a fence
/// of length 7/2 with period 7.
[[nodiscard]] Schedule fig1_schedule();

/// Six speed-5 and three speed-1 unit-weight agents patrolling 50/3 with period 10/3.
[[nodiscard]] Schedule fig2_schedule();

/// Agents (1, T=4), (7/3, T=1), (1/2, T=1) patrolling 7/2 with period 7: the
/// four unit-speed agents of fig1_schedule() merged into one weight-4 agent.
[[nodiscard]] Schedule weighted_three_schedule();

/// Lengthens the fence by v T / 2 on the right and adds an agent zigzagging
/// over the new piece. The period becomes lcm(old period, T).
[[nodiscard]] Schedule extend_with_agent(const Schedule& s, const AgentSpec& spec);

}  // namespace fence
