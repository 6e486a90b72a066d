#include "fence/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace fence {

namespace {

bool collinear(const Breakpoint& a, const Breakpoint& b, const Breakpoint& c) {
  return (b.x - a.x) * (c.t - b.t) == (c.x - b.x) * (b.t - a.t);
}

// Drops repeated times and collinear interior points. The first and last
// breakpoints (t = 0 and t = period) always survive.
std::vector<Breakpoint> canonicalize(std::vector<Breakpoint> pts) {
  std::vector<Breakpoint> unique;
  unique.reserve(pts.size());
  for (auto& p : pts) {
    if (!unique.empty() && unique.back().t == p.t) {
      if (unique.back().x != p.x) {
        throw std::invalid_argument("trajectory: two positions at time " + p.t.to_string());
      }
      continue;
    }
    unique.push_back(std::move(p));
  }
  std::vector<Breakpoint> out;
  out.reserve(unique.size());
  for (auto& p : unique) {
    while (out.size() >= 2 && collinear(out[out.size() - 2], out.back(), p)) out.pop_back();
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

Trajectory::Trajectory(Rational period, std::vector<Breakpoint> breakpoints)
    : period_(std::move(period)) {
  if (period_.sign() <= 0) throw std::invalid_argument("trajectory: period must be positive");
  if (breakpoints.size() < 2) throw std::invalid_argument("trajectory: need at least two breakpoints");
  if (!breakpoints.front().t.is_zero()) throw std::invalid_argument("trajectory: first breakpoint must be at t = 0");
  if (breakpoints.back().t != period_) {
    throw std::invalid_argument("trajectory: last breakpoint must be at t = period");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (breakpoints[i].t < breakpoints[i - 1].t) {
      throw std::invalid_argument("trajectory: breakpoint times must increase");
    }
  }
  if (breakpoints.front().x != breakpoints.back().x) {
    throw std::invalid_argument("trajectory: not periodic (a(0) != a(period))");
  }
  points_ = canonicalize(std::move(breakpoints));
  if (points_.size() < 2) throw std::invalid_argument("trajectory: degenerate");
}

Trajectory Trajectory::constant(const Rational& period, const Rational& x) {
  return Trajectory(period, {{Rational(0), x}, {period, x}});
}

Rational Trajectory::evaluate(const Rational& t) const {
  const Rational u = mod_positive(t, period_);
  auto it = std::upper_bound(points_.begin(), points_.end(), u,
                             [](const Rational& v, const Breakpoint& b) { return v < b.t; });
  // u < period, so `it` is a valid segment end and it != begin().
  const Breakpoint& b = *it;
  const Breakpoint& a = *(it - 1);
  return a.x + (b.x - a.x) * (u - a.t) / (b.t - a.t);
}

CrossingSet Trajectory::crossings(const Rational& level) const {
  std::vector<TimeInterval> raw;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Breakpoint& a = points_[i];
    const Breakpoint& b = points_[i + 1];
    if (a.x == b.x) {
      if (a.x == level) raw.push_back({a.t, b.t});
      continue;
    }
    const Rational lo = min(a.x, b.x);
    const Rational hi = max(a.x, b.x);
    if (level < lo || level > hi) continue;
    const Rational t = a.t + (level - a.x) * (b.t - a.t) / (b.x - a.x);
    raw.push_back({t, t});
  }
  std::sort(raw.begin(), raw.end(),
            [](const TimeInterval& p, const TimeInterval& q) { return p.start < q.start; });

  std::vector<TimeInterval> merged;
  for (auto& iv : raw) {
    if (!merged.empty() && iv.start <= merged.back().end) {
      merged.back().end = max(merged.back().end, iv.end);
    } else {
      merged.push_back(std::move(iv));
    }
  }
  CrossingSet out{period_, {}};
  if (merged.empty()) return out;

  // Times 0 and period are the same instant; join across the seam.
  if (merged.size() > 1 && merged.back().end == period_ && merged.front().start.is_zero()) {
    merged.back().end = period_ + merged.front().end;
    merged.erase(merged.begin());
  }
  if (merged.size() == 1 && merged.front().start.is_zero() && merged.front().end == period_) {
    out.intervals = std::move(merged);
    return out;
  }
  for (auto& iv : merged) {
    if (iv.start >= period_) {
      iv.start -= period_;
      iv.end -= period_;
    }
  }
  std::sort(merged.begin(), merged.end(),
            [](const TimeInterval& p, const TimeInterval& q) { return p.start < q.start; });
  out.intervals = std::move(merged);
  return out;
}

Rational Trajectory::min_position() const {
  Rational m = points_.front().x;
  for (const auto& p : points_) m = min(m, p.x);
  return m;
}

Rational Trajectory::max_position() const {
  Rational m = points_.front().x;
  for (const auto& p : points_) m = max(m, p.x);
  return m;
}

Rational Trajectory::max_speed() const {
  Rational best(0);
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    best = max(best, ((points_[i + 1].x - points_[i].x) / (points_[i + 1].t - points_[i].t)).abs());
  }
  return best;
}

Trajectory Trajectory::with_period(const Rational& new_period) const {
  if (new_period.sign() <= 0 || !is_multiple_of(new_period, period_)) {
    throw std::domain_error("trajectory: new period must be a positive multiple of " +
                            period_.to_string());
  }
  const mpz_class reps = (new_period / period_).numerator();
  std::vector<Breakpoint> pts;
  Rational offset(0);
  for (mpz_class r = 0; r < reps; ++r) {
    for (std::size_t i = (r == 0 ? 0 : 1); i < points_.size(); ++i) {
      pts.push_back({points_[i].t + offset, points_[i].x});
    }
    offset += period_;
  }
  return Trajectory(new_period, std::move(pts));
}

Trajectory zigzag(const Rational& lo, const Rational& hi, const Rational& speed,
                  const Rational& phase, const Rational& period) {
  if (lo.sign() < 0 || !(lo < hi)) throw std::domain_error("zigzag: need 0 <= lo < hi");
  if (speed.sign() <= 0) throw std::domain_error("zigzag: speed must be positive");
  if (period.sign() <= 0) throw std::domain_error("zigzag: period must be positive");
  const Rational half = (hi - lo) / speed;
  const Rational round_trip = half * Rational(2);
  if (!is_multiple_of(period, round_trip)) {
    throw std::domain_error("zigzag: period " + period.to_string() +
                            " is not a multiple of the round trip " + round_trip.to_string());
  }
  const mpz_class trips = (period / round_trip).numerator();
  std::vector<Breakpoint> pts;
  Rational t(0);
  for (mpz_class r = 0; r < trips; ++r) {
    pts.push_back({t, lo});
    pts.push_back({t + half, hi});
    t += round_trip;
  }
  pts.push_back({period, lo});
  return time_shift(Trajectory(period, std::move(pts)), phase);
}

Trajectory time_shift(const Trajectory& traj, const Rational& delta) {
  const Rational& period = traj.period();
  const Rational shift = mod_positive(delta, period);
  if (shift.is_zero()) return traj;
  const auto& src = traj.breakpoints();
  std::vector<Breakpoint> pts;
  pts.reserve(src.size() + 2);
  const Rational start_x = traj.evaluate(-shift);
  pts.push_back({Rational(0), start_x});
  for (std::size_t i = 0; i + 1 < src.size(); ++i) {
    Rational t = mod_positive(src[i].t + shift, period);
    if (!t.is_zero()) pts.push_back({std::move(t), src[i].x});
  }
  std::sort(pts.begin(), pts.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.t < b.t; });
  pts.push_back({period, start_x});
  return Trajectory(period, std::move(pts));
}

Trajectory reflect(const Trajectory& traj, const Rational& length) {
  std::vector<Breakpoint> pts;
  for (const auto& p : traj.breakpoints()) pts.push_back({p.t, length - p.x});
  return Trajectory(traj.period(), std::move(pts));
}

Trajectory scale_space(const Trajectory& traj, const Rational& factor) {
  if (factor.sign() <= 0) throw std::domain_error("scale_space: factor must be positive");
  std::vector<Breakpoint> pts;
  for (const auto& p : traj.breakpoints()) pts.push_back({p.t, p.x * factor});
  return Trajectory(traj.period(), std::move(pts));
}

Trajectory scale_time(const Trajectory& traj, const Rational& factor) {
  if (factor.sign() <= 0) throw std::domain_error("scale_time: factor must be positive");
  std::vector<Breakpoint> pts;
  for (const auto& p : traj.breakpoints()) pts.push_back({p.t * factor, p.x});
  return Trajectory(traj.period() * factor, std::move(pts));
}

}  // namespace fence
