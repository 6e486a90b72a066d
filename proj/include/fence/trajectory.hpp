#pragma once

// Periodic piecewise-linear position functions a(t) on [0, period].

#include <vector>

#include "fence/rational.hpp"

namespace fence {

struct Breakpoint {
  Rational t;
  Rational x;
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Closed time interval [start, end]. In a CrossingSet, start lies in
/// [0, period) and end may exceed the period when the interval wraps the seam.
struct TimeInterval {
  Rational start;
  Rational end;
  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// Solutions of a(t) = level within one period, sorted and disjoint.
struct CrossingSet {
  Rational period;
  std::vector<TimeInterval> intervals;

  [[nodiscard]] bool empty() const { return intervals.empty(); }
  /// True when the trajectory sits at the level for the whole period.
  [[nodiscard]] bool whole_period() const {
    return intervals.size() == 1 && intervals.front().end - intervals.front().start == period;
  }
};

class Trajectory {
public:
  /// Requires: period > 0, at least two breakpoints, first t = 0, last t =
  /// period, t non-decreasing with equal-time duplicates carrying the same x,
  /// first x == last x. Collinear interior breakpoints are removed.
  /// Throws std::invalid_argument otherwise.
  Trajectory(Rational period, std::vector<Breakpoint> breakpoints);

  /// A stationary trajectory at position x.
  static Trajectory constant(const Rational& period, const Rational& x);

  [[nodiscard]] const Rational& period() const { return period_; }
  [[nodiscard]] const std::vector<Breakpoint>& breakpoints() const { return points_; }
  [[nodiscard]] std::size_t segment_count() const { return points_.size() - 1; }

  /// Position at time t (t taken modulo the period).
  [[nodiscard]] Rational evaluate(const Rational& t) const;
  [[nodiscard]] CrossingSet crossings(const Rational& level) const;

  [[nodiscard]] Rational min_position() const;
  [[nodiscard]] Rational max_position() const;
  /// Largest |dx/dt| over all segments.
  [[nodiscard]] Rational max_speed() const;

  /// The same motion expressed on period `new_period`, which must be a
  /// positive integer multiple of the current period.
  [[nodiscard]] Trajectory with_period(const Rational& new_period) const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
  Rational period_;
  std::vector<Breakpoint> points_;
};

/// Back-and-forth motion between lo and hi at the given speed, starting at lo
/// at time `phase`. Throws std::domain_error unless period is an integer
/// multiple of the round trip 2 (hi - lo) / speed.
[[nodiscard]] Trajectory zigzag(const Rational& lo, const Rational& hi, const Rational& speed,
                                const Rational& phase, const Rational& period);

/// result(t) = traj(t - delta).
[[nodiscard]] Trajectory time_shift(const Trajectory& traj, const Rational& delta);

/// result(t) = length - traj(t).
[[nodiscard]] Trajectory reflect(const Trajectory& traj, const Rational& length);

/// result(t) = traj(t) * factor (space scaling about 0); factor > 0.
[[nodiscard]] Trajectory scale_space(const Trajectory& traj, const Rational& factor);

/// result(t) = traj(t / factor) on period * factor; factor > 0.
[[nodiscard]] Trajectory scale_time(const Trajectory& traj, const Rational& factor);

}  // namespace fence
