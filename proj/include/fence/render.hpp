#pragma once

// Space-time diagrams: position runs left to right, time runs upward, and
// each agent sweeps a band of height T above its own path.

#include <string>
#include <vector>

#include "fence/rational.hpp"
#include "fence/schedule.hpp"

namespace fence {

struct RenderOptions {
  unsigned periods_shown = 2;
  double pixels_per_unit_space = 100.0;
  double pixels_per_unit_time = 60.0;
  double band_opacity = 0.35;
  std::vector<std::string> palette{"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                   "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
  /// Adds dashed outlines of every band on top of the fills.
  bool show_dotted_union = false;
};

/// A point of the diagram in schedule units.
struct DiagramPoint {
  Rational x;
  Rational t;
  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

using Polygon = std::vector<DiagramPoint>;

/// The region one agent covers during one period: one convex piece per
/// moving trajectory segment (the segment swept upward by the weight),
/// clipped to the diagram height. Stationary segments become vertical strokes.
struct Band {
  std::size_t agent = 0;
  unsigned period_index = 0;
  std::vector<Polygon> pieces;  ///< counter-clockwise in (x, t)
  std::vector<std::pair<DiagramPoint, DiagramPoint>> strokes;
};

[[nodiscard]] std::vector<Band> band_geometry(const Schedule& s, unsigned periods_shown);

/// SVG 1.1 document. Width = fence_length * pixels_per_unit_space, height =
/// period * periods_shown * pixels_per_unit_time. Coordinates are printed with
/// six decimals, so identical inputs give identical bytes.
[[nodiscard]] std::string render_svg(const Schedule& s, const RenderOptions& opts = {});

}  // namespace fence
