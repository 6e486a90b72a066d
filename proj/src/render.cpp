#include "fence/render.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fence {

namespace {

constexpr int kDecimals = 6;

// Sutherland-Hodgman against the half-plane t <= limit.
Polygon clip_below(const Polygon& poly, const Rational& limit) {
  Polygon out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const DiagramPoint& a = poly[i];
    const DiagramPoint& b = poly[(i + 1) % poly.size()];
    const bool a_in = a.t <= limit;
    const bool b_in = b.t <= limit;
    if (a_in) out.push_back(a);
    if (a_in != b_in) {
      const Rational f = (limit - a.t) / (b.t - a.t);
      out.push_back({a.x + (b.x - a.x) * f, limit});
    }
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

Rational twice_signed_area(const Polygon& poly) {
  Rational sum(0);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const DiagramPoint& a = poly[i];
    const DiagramPoint& b = poly[(i + 1) % poly.size()];
    sum += a.x * b.t - b.x * a.t;
  }
  return sum;
}

std::string num(const Rational& r) { return r.to_decimal(kDecimals); }

}  // namespace

std::vector<Band> band_geometry(const Schedule& s, unsigned periods_shown) {
  require_valid(s);
  if (periods_shown == 0) throw std::invalid_argument("render: periods_shown must be positive");
  const Rational top = s.period * Rational(static_cast<long>(periods_shown));
  std::vector<Band> bands;
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const Agent& agent = s.agents[i];
    const Rational& weight = agent.spec.weight();
    const auto& pts = agent.trajectory.breakpoints();
    for (unsigned k = 0; k < periods_shown; ++k) {
      Band band;
      band.agent = i;
      band.period_index = k;
      const Rational offset = s.period * Rational(static_cast<long>(k));
      for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        const DiagramPoint a{pts[j].x, pts[j].t + offset};
        const DiagramPoint b{pts[j + 1].x, pts[j + 1].t + offset};
        if (a.x == b.x) {
          const Rational hi = min(b.t + weight, top);
          band.strokes.push_back({a, {a.x, hi}});
          continue;
        }
        Polygon piece{a, b, {b.x, b.t + weight}, {a.x, a.t + weight}};
        piece = clip_below(piece, top);
        if (piece.size() < 3) continue;
        if (twice_signed_area(piece).sign() < 0) std::reverse(piece.begin(), piece.end());
        band.pieces.push_back(std::move(piece));
      }
      bands.push_back(std::move(band));
    }
  }
  return bands;
}

std::string render_svg(const Schedule& s, const RenderOptions& opts) {
  if (!(opts.pixels_per_unit_space > 0) || !(opts.pixels_per_unit_time > 0)) {
    throw std::invalid_argument("render: pixel scales must be positive");
  }
  const auto bands = band_geometry(s, opts.periods_shown);
  const Rational sx = Rational::from_double(opts.pixels_per_unit_space);
  const Rational st = Rational::from_double(opts.pixels_per_unit_time);
  const Rational top = s.period * Rational(static_cast<long>(opts.periods_shown));
  const Rational width = s.fence_length * sx;
  const Rational height = top * st;
  auto px = [&](const DiagramPoint& p) { return num(p.x * sx) + "," + num((top - p.t) * st); };
  auto color = [&](std::size_t agent) {
    return opts.palette.empty() ? std::string("#808080") : opts.palette[agent % opts.palette.size()];
  };
  auto path_data = [&](const Band& band) {
    std::string d;
    for (const auto& piece : band.pieces) {
      for (std::size_t i = 0; i < piece.size(); ++i) {
        d += (i == 0 ? "M" : " L");
        d += px(piece[i]);
      }
      d += " Z ";
    }
    if (!d.empty()) d.pop_back();
    return d;
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
  os << "  <title>fence " << s.fence_length << ", period " << s.period << ", " << s.agents.size()
     << " agents</title>\n";
  os << "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
     << "\" fill=\"#ffffff\"/>\n";

  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    os << "  <g class=\"band\" data-agent=\"" << i << "\" data-speed=\"" << s.agents[i].spec.speed()
       << "\" data-weight=\"" << s.agents[i].spec.weight() << "\" fill=\"" << color(i) << "\" fill-opacity=\""
       << Rational::from_double(opts.band_opacity).to_decimal(3) << "\" fill-rule=\"nonzero\" stroke=\"none\">\n";
    for (const auto& band : bands) {
      if (band.agent != i) continue;
      os << "    <path data-period=\"" << band.period_index << "\" d=\"" << path_data(band) << "\"/>\n";
      for (const auto& [a, b] : band.strokes) {
        os << "    <line data-period=\"" << band.period_index << "\" x1=\"" << num(a.x * sx) << "\" y1=\""
           << num((top - a.t) * st) << "\" x2=\"" << num(b.x * sx) << "\" y2=\"" << num((top - b.t) * st)
           << "\" stroke=\"" << color(i) << "\" stroke-width=\"2\"/>\n";
      }
    }
    os << "  </g>\n";
  }

  // Agent paths: the lower edge of each band.
  os << "  <g class=\"paths\" fill=\"none\" stroke-width=\"1.5\">\n";
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto& pts = s.agents[i].trajectory.breakpoints();
    for (unsigned k = 0; k < opts.periods_shown; ++k) {
      const Rational offset = s.period * Rational(static_cast<long>(k));
      os << "    <polyline data-agent=\"" << i << "\" data-period=\"" << k << "\" stroke=\"" << color(i)
         << "\" points=\"";
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j > 0) os << ' ';
        os << px({pts[j].x, pts[j].t + offset});
      }
      os << "\"/>\n";
    }
  }
  os << "  </g>\n";

  if (opts.show_dotted_union) {
    os << "  <g class=\"union-outline\" fill=\"none\" stroke=\"#333333\" stroke-width=\"0.75\" "
          "stroke-dasharray=\"3,3\">\n";
    for (const auto& band : bands) {
      if (band.pieces.empty()) continue;
      os << "    <path data-agent=\"" << band.agent << "\" data-period=\"" << band.period_index << "\" d=\""
         << path_data(band) << "\"/>\n";
    }
    os << "  </g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fence
