#pragma once

// Simulated-annealing search for schedules that patrol a target length.
//
// Candidates are scored in floating point (uncovered fraction of the
// space-time rectangle, sampled on a grid of positions). Scores never decide
// success: a candidate whose float score reaches zero is snapped to a rational
// grid and handed to the exact verifier, and only a Patrols verdict counts.
// Positions where a snapped candidate was found uncovered are added to the
// float sample grid, so later scores see the same gap.

#include <cstdint>
#include <optional>
#include <vector>

#include "fence/rational.hpp"
#include "fence/schedule.hpp"

namespace fence {

struct SearchConfig {
  std::uint64_t seed = 1;
  std::size_t budget = 10000;          ///< candidate evaluations
  std::size_t waypoints_per_agent = 8;
  long grid_denominator = 840;         ///< snap breakpoints to multiples of 1 / D
  double initial_temperature = 0.1;    ///< relative to the starting score
  double cooling = 0.9995;             ///< per evaluation
  unsigned workers = 1;                ///< evaluation threads; never affects results
  std::size_t batch_size = 8;          ///< proposals per deterministic super-step
  std::size_t x_samples = 49;          ///< float scoring grid over [0, l]
  double certify_threshold = 1e-12;    ///< float score treated as zero
  std::optional<Schedule> warm_start;  ///< starting schedule (same agents, same target)
};

enum class SearchStatus { Certified, Exhausted };

struct SearchOutcome {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<Schedule> best_schedule;  ///< set only when Certified
  Rational best_uncovered_area;           ///< exact area of the best snapped candidate seen
  std::size_t evaluations = 0;
  std::size_t certification_attempts = 0;
};

/// Searches for a schedule of `specs` patrolling [0, target_length]. Starts from
/// cfg.warm_start when given, otherwise from the partition layout stretched to
/// the target. Throws std::domain_error when target_length <= 0 or when the
/// warm start does not match specs and target.
[[nodiscard]] SearchOutcome search(const std::vector<AgentSpec>& specs, const Rational& target_length,
                                   const SearchConfig& cfg);

/// Float mirror of one agent: waypoints of a periodic piecewise-linear path.
struct FloatAgent {
  double speed = 1;
  double weight = 1;
  std::vector<double> t;  ///< strictly increasing in [0, period)
  std::vector<double> x;
};

struct FloatSchedule {
  Rational fence_length;
  Rational period;
  std::vector<FloatAgent> agents;
};

/// Float mirror of the uncovered fraction, sampled at `samples` positions.
[[nodiscard]] double float_objective(const FloatSchedule& fs, const std::vector<double>& samples);

/// Snaps waypoints to multiples of 1/D, clamps them into the fence, and
/// repairs speed violations exactly. Nullopt when no valid schedule results.
[[nodiscard]] std::optional<Schedule> snap_to_grid(const FloatSchedule& fs, const std::vector<AgentSpec>& specs,
                                                   long grid_denominator);

/// Runs the exact verifier on a float candidate; returns the schedule only
/// when it is certified. This is the single gate to a Certified outcome.
[[nodiscard]] std::optional<Schedule> certify(const FloatSchedule& fs, const std::vector<AgentSpec>& specs,
                                              long grid_denominator);

enum class WeightMode { Unit, Random };
enum class SpeedMode { Random, Equal };

struct FalsifyTrial {
  std::vector<AgentSpec> specs;
  Rational target;
  SearchStatus status = SearchStatus::Exhausted;
};

struct FalsifyReport {
  std::size_t trials = 0;
  std::size_t certifications = 0;
  std::vector<FalsifyTrial> results;
};

/// Draws `trials` random agent sets of size k and searches each at
/// 101/100 of its partition bound. Any certification contradicts the
/// optimality of the partition strategy for that setting.
[[nodiscard]] FalsifyReport falsify_bound(std::size_t k, WeightMode weight_mode, std::size_t trials,
                                          const SearchConfig& cfg, SpeedMode speed_mode = SpeedMode::Random);

struct RatioResult {
  Rational ratio;
  Schedule schedule;  ///< certified
};

/// Best certified ratio l / sum(v_i T_i) found over random unit-weight agent
/// sets of size 1..k_max, starting from each partition schedule and from any
/// given warm starts, pushing the length up by searching.
[[nodiscard]] RatioResult improve_ratio(std::size_t k_max, const SearchConfig& cfg,
                                        const std::vector<Schedule>& warm_starts = {});

}  // namespace fence
