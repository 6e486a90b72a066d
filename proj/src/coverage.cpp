#include "fence/coverage.hpp"

#include <algorithm>
#include <stdexcept>

namespace fence {

// ---------------------------------------------------------------------------
// ArcSet

ArcSet ArcSet::full_circle(Rational circumference) {
  return ArcSet(std::move(circumference), true, {});
}

ArcSet ArcSet::from_arcs(Rational circumference, std::vector<Arc> arcs) {
  const Rational& p = circumference;
  // Unroll onto (0, P].
  std::vector<Arc> pieces;
  pieces.reserve(arcs.size() * 2);
  for (auto& a : arcs) {
    if (!(a.start < a.end)) continue;
    if (a.end - a.start >= p) return full_circle(std::move(circumference));
    const Rational s = mod_positive(a.start, p);
    const Rational e = s + (a.end - a.start);
    if (e <= p) {
      pieces.push_back({s, e});
    } else {
      pieces.push_back({s, p});
      pieces.push_back({Rational(0), e - p});
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Arc& a, const Arc& b) { return a.start < b.start; });
  std::vector<Arc> merged;
  for (auto& a : pieces) {
    if (!merged.empty() && a.start <= merged.back().end) {
      merged.back().end = max(merged.back().end, a.end);
    } else {
      merged.push_back(std::move(a));
    }
  }
  if (merged.size() == 1 && merged.front().start.is_zero() && merged.front().end == p) {
    return full_circle(std::move(circumference));
  }
  if (merged.size() > 1 && merged.front().start.is_zero() && merged.back().end == p) {
    merged.back().end = p + merged.front().end;
    merged.erase(merged.begin());
  }
  return ArcSet(std::move(circumference), false, std::move(merged));
}

Rational ArcSet::measure() const {
  if (full_) return circumference_;
  Rational total(0);
  for (const auto& a : arcs_) total += a.end - a.start;
  return total;
}

bool ArcSet::contains(const Rational& t) const {
  if (full_) return true;
  const Rational u = mod_positive(t, circumference_);
  const Rational v = u + circumference_;
  for (const auto& a : arcs_) {
    if ((a.start < u && u <= a.end) || (a.start < v && v <= a.end)) return true;
  }
  return false;
}

ArcSet ArcSet::complement() const {
  if (full_) return ArcSet(circumference_, false, {});
  if (arcs_.empty()) return full_circle(circumference_);
  std::vector<Arc> gaps;
  gaps.reserve(arcs_.size());
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const Arc& cur = arcs_[i];
    Rational next_start = i + 1 < arcs_.size() ? arcs_[i + 1].start : arcs_.front().start + circumference_;
    if (cur.end < next_start) {
      const Rational s = mod_positive(cur.end, circumference_);
      gaps.push_back({s, s + (next_start - cur.end)});
    }
  }
  std::sort(gaps.begin(), gaps.end(), [](const Arc& a, const Arc& b) { return a.start < b.start; });
  return ArcSet(circumference_, false, std::move(gaps));
}

// ---------------------------------------------------------------------------
// Coverage at a position

ArcSet coverage_arcs(const Schedule& s, const Rational& x) {
  if (x.sign() < 0 || x > s.fence_length) {
    throw std::domain_error("coverage_arcs: x = " + x.to_string() + " lies outside [0, " +
                            s.fence_length.to_string() + "]");
  }
  std::vector<Arc> arcs;
  for (const auto& agent : s.agents) {
    const CrossingSet cs = agent.trajectory.crossings(x);
    for (const auto& iv : cs.intervals) arcs.push_back({iv.start, iv.end + agent.spec.weight()});
  }
  return ArcSet::from_arcs(s.period, std::move(arcs));
}

// ---------------------------------------------------------------------------
// Critical positions

namespace {

// A non-constant trajectory segment viewed as crossing time t(x) over its
// x-range: t(x) = t_at_origin + x * dtdx.
struct MovingSegment {
  Rational x_lo;
  Rational x_hi;
  Rational t_at_origin;
  Rational dtdx;
  Rational weight;

  [[nodiscard]] Rational time_at(const Rational& x) const { return t_at_origin + x * dtdx; }
};

std::vector<MovingSegment> moving_segments(const Schedule& s) {
  std::vector<MovingSegment> out;
  for (const auto& agent : s.agents) {
    const auto& pts = agent.trajectory.breakpoints();
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
      const Breakpoint& a = pts[j];
      const Breakpoint& b = pts[j + 1];
      if (a.x == b.x) continue;
      const Rational dtdx = (b.t - a.t) / (b.x - a.x);
      out.push_back({min(a.x, b.x), max(a.x, b.x), a.t - a.x * dtdx, dtdx, agent.spec.weight()});
    }
  }
  return out;
}

}  // namespace

std::vector<Rational> critical_positions(const Schedule& s) {
  const Rational& l = s.fence_length;
  const Rational& p = s.period;
  std::vector<Rational> out{Rational(0), l};
  for (const auto& agent : s.agents) {
    for (const auto& bp : agent.trajectory.breakpoints()) {
      if (bp.x.sign() >= 0 && bp.x <= l) out.push_back(bp.x);
    }
  }

  const auto segs = moving_segments(s);
  std::vector<Rational> offsets;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const MovingSegment& a = segs[i];
      const MovingSegment& b = segs[j];
      const Rational slope = a.dtdx - b.dtdx;
      if (slope.is_zero()) continue;
      const Rational lo = max(max(a.x_lo, b.x_lo), Rational(0));
      const Rational hi = min(min(a.x_hi, b.x_hi), l);
      if (!(lo < hi)) continue;
      // Endpoint pairs: start/start, end/end, end_a/start_b, start_a/end_b.
      offsets = {Rational(0), a.weight - b.weight, a.weight, -b.weight};
      std::sort(offsets.begin(), offsets.end());
      offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
      const Rational base = a.t_at_origin - b.t_at_origin;
      for (const auto& c : offsets) {
        // f(x) = base + c + slope * x, solve f(x) = k P.
        const Rational f_lo = base + c + slope * lo;
        const Rational f_hi = base + c + slope * hi;
        const Rational f_min = min(f_lo, f_hi);
        const Rational f_max = max(f_lo, f_hi);
        const mpz_class k_first = (f_min / p).ceil();
        const mpz_class k_last = (f_max / p).floor();
        for (mpz_class k = k_first; k <= k_last; ++k) {
          const Rational target = p * Rational(k, mpz_class(1));
          out.push_back((target - base - c) / slope);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Verification

Verdict verify(const Schedule& s) {
  require_valid(s);
  const auto crit = critical_positions(s);

  Verdict verdict;
  verdict.uncovered_area = Rational(0);
  bool failed = false;

  auto examine = [&](const Rational& x_lo, const Rational& x_hi, const Rational& x) {
    const ArcSet uncovered = coverage_arcs(s, x).complement();
    if (uncovered.empty()) return;
    failed = true;
    if (x_lo != x_hi) verdict.uncovered_area += (x_hi - x_lo) * uncovered.measure();
    if (!verdict.witness) {
      const Arc* widest = nullptr;
      if (uncovered.full()) {
        verdict.witness = Witness{x, s.period / Rational(2)};
      } else {
        for (const auto& a : uncovered.arcs()) {
          if (widest == nullptr || a.end - a.start > widest->end - widest->start) widest = &a;
        }
        verdict.witness = Witness{x, mod_positive((widest->start + widest->end) / Rational(2), s.period)};
      }
    }
    std::vector<Arc> arcs = uncovered.full() ? std::vector<Arc>{{Rational(0), s.period}} : uncovered.arcs();
    verdict.regions.push_back({x_lo, x_hi, x, std::move(arcs)});
  };

  for (std::size_t i = 0; i < crit.size(); ++i) {
    examine(crit[i], crit[i], crit[i]);
    if (i + 1 < crit.size()) examine(crit[i], crit[i + 1], (crit[i] + crit[i + 1]) / Rational(2));
  }

  verdict.status = failed ? VerdictStatus::Fails : VerdictStatus::Patrols;
  if (failed != (verdict.uncovered_area.sign() > 0)) {
    throw std::logic_error("verify: uncovered positions without uncovered area (inconsistent sweep)");
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Idle profile

namespace {

// Longest circular gap between the visit intervals at a single position.
std::optional<Rational> max_gap_at(const Schedule& s, const Rational& x) {
  std::vector<Arc> visits;
  for (const auto& agent : s.agents) {
    for (const auto& iv : agent.trajectory.crossings(x).intervals) visits.push_back({iv.start, iv.end});
  }
  if (visits.empty()) return std::nullopt;
  const Rational& p = s.period;
  // Closed visit intervals; unroll, sort, merge.
  std::vector<Arc> pieces;
  for (auto& v : visits) {
    if (v.end - v.start >= p) return Rational(0);
    if (v.end <= p) {
      pieces.push_back(v);
    } else {
      pieces.push_back({v.start, p});
      pieces.push_back({Rational(0), v.end - p});
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Arc& a, const Arc& b) { return a.start < b.start; });
  std::vector<Arc> merged;
  for (auto& a : pieces) {
    if (!merged.empty() && a.start <= merged.back().end) {
      merged.back().end = max(merged.back().end, a.end);
    } else {
      merged.push_back(std::move(a));
    }
  }
  Rational best(0);
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const Rational next = i + 1 < merged.size() ? merged[i + 1].start : merged.front().start + p;
    best = max(best, next - merged[i].end);
  }
  return best;
}

}  // namespace

IdleProfile idle_profile(const Schedule& s) {
  require_valid(s);
  for (const auto& a : s.agents) {
    if (a.spec.weight() != s.agents.front().spec.weight()) {
      throw std::domain_error("idle_profile: requires equal weights (idle time is agent-dependent otherwise)");
    }
  }
  const auto crit = critical_positions(s);
  const auto segs = moving_segments(s);
  const Rational& p = s.period;

  IdleProfile profile;
  bool have_max = false;
  bool unvisited = false;
  auto record = [&](IdleCell cell, const Rational& where) {
    if (!cell.max_gap) {
      if (!unvisited) {
        unvisited = true;
        profile.argmax_x = where;
      }
    } else if (!unvisited && (!have_max || *cell.max_gap > *profile.global_max)) {
      have_max = true;
      profile.global_max = cell.max_gap;
      profile.argmax_x = where;
    }
    profile.cells.push_back(std::move(cell));
  };

  for (std::size_t i = 0; i < crit.size(); ++i) {
    record(IdleCell{crit[i], crit[i], max_gap_at(s, crit[i])}, crit[i]);
    if (i + 1 == crit.size()) break;

    // Inside an open cell every visit time is a fixed linear function of x
    // and their order never changes, so each gap is linear and its supremum
    // over the cell is attained in the limit at one of the two ends.
    const Rational& lo = crit[i];
    const Rational& hi = crit[i + 1];
    const Rational mid = (lo + hi) / Rational(2);
    std::vector<const MovingSegment*> active;
    for (const auto& seg : segs) {
      if (seg.x_lo < mid && mid < seg.x_hi) active.push_back(&seg);
    }
    if (active.empty()) {
      record(IdleCell{lo, hi, std::nullopt}, mid);
      continue;
    }
    std::sort(active.begin(), active.end(), [&](const MovingSegment* a, const MovingSegment* b) {
      return a->time_at(mid) < b->time_at(mid);
    });
    Rational best(0);
    Rational where = lo;
    for (const Rational* end : {&lo, &hi}) {
      for (std::size_t j = 0; j < active.size(); ++j) {
        const Rational next = j + 1 < active.size() ? active[j + 1]->time_at(*end)
                                                    : active.front()->time_at(*end) + p;
        const Rational gap = next - active[j]->time_at(*end);
        if (gap > best) {
          best = gap;
          where = *end;
        }
      }
    }
    record(IdleCell{lo, hi, best}, where);
  }
  if (unvisited) profile.global_max.reset();
  return profile;
}

}  // namespace fence
