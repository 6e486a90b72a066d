#pragma once

// Shared data model: agents, schedules, verdicts, and schedule validation.

#include <optional>
#include <string>
#include <vector>

#include "fence/rational.hpp"
#include "fence/trajectory.hpp"

namespace fence {

/// Maximum speed and weight (idle allowance) of one agent. Both positive.
class AgentSpec {
public:
  /// Throws std::invalid_argument unless speed > 0 and weight > 0.
  explicit AgentSpec(Rational speed, Rational weight = Rational(1));

  [[nodiscard]] const Rational& speed() const { return speed_; }
  [[nodiscard]] const Rational& weight() const { return weight_; }
  /// v * T, the length this agent contributes to the partition strategy (times two).
  [[nodiscard]] Rational weighted_speed() const { return speed_ * weight_; }

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;

private:
  Rational speed_;
  Rational weight_;
};

struct Agent {
  AgentSpec spec;
  Trajectory trajectory;
  friend bool operator==(const Agent&, const Agent&) = default;
};

/// A periodic strategy on the fence [0, fence_length]. Constructed freely;
/// use validate_schedule() to check the invariants.
struct Schedule {
  Rational fence_length;
  Rational period;
  std::vector<Agent> agents;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Builds a schedule from agents whose trajectories may have different
/// periods; every trajectory is re-expressed on the rational lcm of them.
[[nodiscard]] Schedule make_schedule(Rational fence_length, std::vector<Agent> agents);

[[nodiscard]] std::vector<AgentSpec> specs_of(const Schedule& s);

enum class ViolationKind { FenceLength, Period, Range, Speed };

struct Violation {
  ViolationKind kind;
  std::optional<std::size_t> agent;    ///< absent for schedule-level problems
  std::optional<std::size_t> segment;  ///< index into the agent's breakpoints
  std::string message;
};

/// Empty iff: fence_length > 0, period > 0, every trajectory has the schedule
/// period, stays inside [0, fence_length], and respects its agent's speed.
[[nodiscard]] std::vector<Violation> validate_schedule(const Schedule& s);

/// Thrown by operations that require a valid schedule.
class InvalidSchedule : public std::invalid_argument {
public:
  explicit InvalidSchedule(std::vector<Violation> violations);
  [[nodiscard]] const std::vector<Violation>& violations() const { return violations_; }

private:
  std::vector<Violation> violations_;
};

void require_valid(const Schedule& s);

/// Half-open time arc (start, end] on a circle of the schedule period.
struct Arc {
  Rational start;
  Rational end;
  friend bool operator==(const Arc&, const Arc&) = default;
};

struct UncoveredRegion {
  Rational x_lo;  ///< equal to x_hi for a single critical position
  Rational x_hi;
  Rational sample_x;
  std::vector<Arc> uncovered;  ///< uncovered arcs at sample_x
};

struct Witness {
  Rational x;
  Rational t_star;
};

enum class VerdictStatus { Patrols, Fails };

struct Verdict {
  VerdictStatus status = VerdictStatus::Patrols;
  std::optional<Witness> witness;
  Rational uncovered_area;
  std::vector<UncoveredRegion> regions;

  [[nodiscard]] bool patrols() const { return status == VerdictStatus::Patrols; }
};

}  // namespace fence
