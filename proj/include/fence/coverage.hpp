#pragma once

// Exact patrolling verifier.
//
// A visit to x at time t covers the arc (t, t + T] of patrol times t* for an
// agent of weight T. For a periodic schedule the fence is patrolled iff, for
// every x in [0, l], these arcs cover the whole circle of circumference P.
// The covered set changes combinatorially only at finitely many critical
// positions (breakpoint coordinates and coincidences of two arc endpoints),
// so evaluating every critical position and one point strictly between each
// consecutive pair decides the question exactly.

#include <optional>
#include <vector>

#include "fence/rational.hpp"
#include "fence/schedule.hpp"

namespace fence {

/// Union-normalized set of half-open arcs (start, end] on a circle.
/// Arcs are stored sorted by start with start in [0, P) and end in
/// (start, start + P); a full circle is a flag with no arcs.
class ArcSet {
public:
  /// Union of arbitrary arcs with start < end. Arcs of length >= P make the
  /// set full.
  static ArcSet from_arcs(Rational circumference, std::vector<Arc> arcs);
  static ArcSet full_circle(Rational circumference);

  [[nodiscard]] const Rational& circumference() const { return circumference_; }
  [[nodiscard]] bool full() const { return full_; }
  [[nodiscard]] bool empty() const { return !full_ && arcs_.empty(); }
  [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }
  [[nodiscard]] Rational measure() const;
  [[nodiscard]] bool contains(const Rational& t) const;
  [[nodiscard]] ArcSet complement() const;

private:
  ArcSet(Rational circumference, bool full, std::vector<Arc> arcs)
      : circumference_(std::move(circumference)), full_(full), arcs_(std::move(arcs)) {}

  Rational circumference_;
  bool full_ = false;
  std::vector<Arc> arcs_;
};

/// Patrol times t* (mod P) at which position x is covered by some agent.
/// Throws std::domain_error when x lies outside the fence.
[[nodiscard]] ArcSet coverage_arcs(const Schedule& s, const Rational& x);

/// Sorted, deduplicated positions at which coverage can change structure:
/// 0, l, every breakpoint coordinate, and every x where two arc endpoints
/// (start/start, end/end, start/end) of two trajectory segments coincide
/// modulo the period.
[[nodiscard]] std::vector<Rational> critical_positions(const Schedule& s);

/// Decides whether s patrols its fence. Throws InvalidSchedule when s fails
/// validation. The witness is taken at the first failing sample in ascending
/// x order, at the midpoint of the longest uncovered arc there.
[[nodiscard]] Verdict verify(const Schedule& s);

struct IdleCell {
  Rational x_lo;
  Rational x_hi;  ///< equal to x_lo for a critical position
  /// Longest time between consecutive visits (supremum over the cell);
  /// absent when the cell is never visited.
  std::optional<Rational> max_gap;
};

struct IdleProfile {
  std::vector<IdleCell> cells;
  std::optional<Rational> global_max;  ///< absent if some position is never visited
  Rational argmax_x;
};

/// Requires all agents to share one weight; throws std::domain_error otherwise.
[[nodiscard]] IdleProfile idle_profile(const Schedule& s);

}  // namespace fence
