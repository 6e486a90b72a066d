#include "fence/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "fence/coverage.hpp"
#include "fence/strategies.hpp"

namespace fence {

// ---------------------------------------------------------------------------
// Float scoring

namespace {

struct ArcF {
  double start;
  double len;
};

double uncovered_on_circle(std::vector<ArcF>& arcs, double period) {
  if (arcs.empty()) return period;
  for (auto& a : arcs) {
    if (a.len >= period) return 0.0;
    a.start = std::fmod(a.start, period);
    if (a.start < 0) a.start += period;
  }
  std::sort(arcs.begin(), arcs.end(), [](const ArcF& a, const ArcF& b) { return a.start < b.start; });
  const double s0 = arcs.front().start;
  double reach = s0 + arcs.front().len;
  for (const auto& a : arcs) reach = std::max(reach, a.start + a.len - period);
  double gap = 0.0;
  for (std::size_t i = 1; i < arcs.size(); ++i) {
    if (arcs[i].start > reach) gap += arcs[i].start - reach;
    reach = std::max(reach, arcs[i].start + arcs[i].len);
  }
  gap += std::max(0.0, s0 + period - reach);
  return gap;
}

}  // namespace

double float_objective(const FloatSchedule& fs, const std::vector<double>& samples) {
  const double period = fs.period.to_double();
  thread_local std::vector<ArcF> arcs;
  double total = 0.0;
  double worst = 0.0;
  for (const double x : samples) {
    arcs.clear();
    bool full = false;
    for (const auto& agent : fs.agents) {
      const std::size_t n = agent.t.size();
      if (n == 1) {
        if (agent.x[0] == x) full = true;
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        const double ta = agent.t[j];
        const double xa = agent.x[j];
        const double tb = j + 1 < n ? agent.t[j + 1] : agent.t[0] + period;
        const double xb = j + 1 < n ? agent.x[j + 1] : agent.x[0];
        if (xa == xb) {
          if (xa == x) arcs.push_back({ta, tb - ta + agent.weight});
        } else if ((x - xa) * (x - xb) <= 0.0) {
          const double tc = ta + (x - xa) / (xb - xa) * (tb - ta);
          arcs.push_back({tc, agent.weight});
        }
      }
      if (full) break;
    }
    if (full) continue;
    const double gap = uncovered_on_circle(arcs, period);
    total += gap;
    worst = std::max(worst, gap);
  }
  if (samples.empty()) return 0.0;
  return (total / static_cast<double>(samples.size()) + 0.1 * worst) / period;
}

// ---------------------------------------------------------------------------
// Snapping and certification

std::optional<Schedule> snap_to_grid(const FloatSchedule& fs, const std::vector<AgentSpec>& specs,
                                     long grid_denominator) {
  if (specs.size() != fs.agents.size() || grid_denominator <= 0) return std::nullopt;
  const Rational& period = fs.period;
  const Rational& length = fs.fence_length;
  const double d = static_cast<double>(grid_denominator);
  std::vector<Agent> agents;
  try {
    for (std::size_t i = 0; i < fs.agents.size(); ++i) {
      const FloatAgent& fa = fs.agents[i];
      const Rational& v = specs[i].speed();
      std::vector<Breakpoint> pts;
      for (std::size_t j = 0; j < fa.t.size(); ++j) {
        Rational t(std::llround(fa.t[j] * d), grid_denominator);
        t = mod_positive(t, period);
        Rational x(std::llround(fa.x[j] * d), grid_denominator);
        x = max(Rational(0), min(x, length));
        pts.push_back({std::move(t), std::move(x)});
      }
      std::stable_sort(pts.begin(), pts.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.t < b.t; });
      pts.erase(std::unique(pts.begin(), pts.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.t == b.t; }),
                pts.end());
      if (pts.empty()) return std::nullopt;
      const std::size_t n = pts.size();
      if (n == 1) {
        agents.push_back({specs[i], Trajectory::constant(period, pts.front().x)});
        continue;
      }
      // Pull each waypoint toward its predecessor until every segment is
      // within the speed limit (cyclically).
      for (int pass = 0; pass < 4; ++pass) {
        bool changed = false;
        for (std::size_t j = 0; j < n; ++j) {
          const std::size_t k = (j + 1) % n;
          const Rational dt = k == 0 ? pts[0].t + period - pts[j].t : pts[k].t - pts[j].t;
          const Rational limit = v * dt;
          const Rational dx = pts[k].x - pts[j].x;
          if (dx.abs() > limit) {
            pts[k].x = dx.sign() > 0 ? pts[j].x + limit : pts[j].x - limit;
            changed = true;
          }
        }
        if (!changed) break;
      }
      std::vector<Breakpoint> bps;
      if (pts.front().t.is_zero()) {
        bps = pts;
        bps.push_back({period, pts.front().x});
      } else {
        const Breakpoint& last = pts.back();
        const Rational span = pts.front().t + period - last.t;
        const Rational at_seam = last.x + (pts.front().x - last.x) * (period - last.t) / span;
        bps.push_back({Rational(0), at_seam});
        bps.insert(bps.end(), pts.begin(), pts.end());
        bps.push_back({period, at_seam});
      }
      agents.push_back({specs[i], Trajectory(period, std::move(bps))});
    }
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  Schedule s{length, period, std::move(agents)};
  if (!validate_schedule(s).empty()) return std::nullopt;
  return s;
}

std::optional<Schedule> certify(const FloatSchedule& fs, const std::vector<AgentSpec>& specs,
                                long grid_denominator) {
  auto snapped = snap_to_grid(fs, specs, grid_denominator);
  if (!snapped) return std::nullopt;
  if (!verify(*snapped).patrols()) return std::nullopt;
  return snapped;
}

// ---------------------------------------------------------------------------
// Annealing

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

FloatSchedule to_float(const Schedule& s, std::size_t waypoints) {
  FloatSchedule fs{s.fence_length, s.period, {}};
  const double period = s.period.to_double();
  for (const auto& agent : s.agents) {
    FloatAgent fa;
    fa.speed = agent.spec.speed().to_double();
    fa.weight = agent.spec.weight().to_double();
    const auto& pts = agent.trajectory.breakpoints();
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
      fa.t.push_back(pts[j].t.to_double());
      fa.x.push_back(pts[j].x.to_double());
    }
    // Fill up to the waypoint count by splitting the longest time gaps.
    while (fa.t.size() < waypoints) {
      std::size_t widest = 0;
      double widest_dt = -1;
      for (std::size_t j = 0; j < fa.t.size(); ++j) {
        const double next = j + 1 < fa.t.size() ? fa.t[j + 1] : fa.t[0] + period;
        if (next - fa.t[j] > widest_dt) {
          widest_dt = next - fa.t[j];
          widest = j;
        }
      }
      const std::size_t k = (widest + 1) % fa.t.size();
      const double tm = fa.t[widest] + widest_dt / 2;
      const double xm = (fa.x[widest] + fa.x[k]) / 2;
      fa.t.insert(fa.t.begin() + static_cast<std::ptrdiff_t>(widest + 1), tm);
      fa.x.insert(fa.x.begin() + static_cast<std::ptrdiff_t>(widest + 1), xm);
    }
    fs.agents.push_back(std::move(fa));
  }
  return fs;
}

void normalize_times(FloatAgent& a, double period) {
  std::vector<std::size_t> idx(a.t.size());
  for (auto& t : a.t) {
    t = std::fmod(t, period);
    if (t < 0) t += period;
    if (t >= period) t -= period;
  }
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return a.t[i] < a.t[j]; });
  std::vector<double> t;
  std::vector<double> x;
  for (std::size_t i : idx) {
    if (!t.empty() && a.t[i] <= t.back()) continue;
    t.push_back(a.t[i]);
    x.push_back(a.x[i]);
  }
  a.t = std::move(t);
  a.x = std::move(x);
}

// Feasible position range for waypoint j given its neighbours.
std::pair<double, double> position_range(const FloatAgent& a, std::size_t j, double period, double length) {
  const std::size_t n = a.t.size();
  double lo = 0.0;
  double hi = length;
  if (n >= 2) {
    const std::size_t prev = (j + n - 1) % n;
    const std::size_t next = (j + 1) % n;
    const double dt_prev = j == 0 ? a.t[0] + period - a.t[prev] : a.t[j] - a.t[prev];
    const double dt_next = next == 0 ? a.t[0] + period - a.t[j] : a.t[next] - a.t[j];
    lo = std::max({lo, a.x[prev] - a.speed * dt_prev, a.x[next] - a.speed * dt_next});
    hi = std::min({hi, a.x[prev] + a.speed * dt_prev, a.x[next] + a.speed * dt_next});
  }
  return {lo, hi};
}

class Annealer {
public:
  Annealer(const std::vector<AgentSpec>& specs, const Rational& target, const SearchConfig& cfg)
      : specs_(specs), cfg_(cfg), rng_(splitmix64(cfg.seed)) {
    length_ = target.to_double();
    const std::size_t n = std::max<std::size_t>(cfg.x_samples, 2);
    for (std::size_t i = 0; i < n; ++i) {
      samples_.push_back(length_ * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }

  SearchOutcome run(const Schedule& initial) {
    period_ = initial.period.to_double();
    SearchOutcome out;

    const Verdict v0 = verify(initial);
    out.evaluations = 1;
    out.best_uncovered_area = v0.uncovered_area;
    if (v0.patrols()) {
      out.status = SearchStatus::Certified;
      out.best_schedule = initial;
      return out;
    }
    add_sample(v0.witness->x.to_double());

    FloatSchedule current = to_float(initial, cfg_.waypoints_per_agent);
    double current_score = float_objective(current, samples_);
    FloatSchedule best = current;
    double best_score = current_score;
    double temperature = cfg_.initial_temperature * std::max(current_score, 1e-9);

    std::vector<FloatSchedule> proposals;
    std::vector<double> scores;
    while (out.evaluations < cfg_.budget) {
      const std::size_t batch = std::min(std::max<std::size_t>(cfg_.batch_size, 1), cfg_.budget - out.evaluations);
      proposals.assign(batch, current);
      for (auto& p : proposals) mutate(p);
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
      score_all(proposals, scores);
      out.evaluations += batch;

      // Certification attempts in (score, index) order.
      std::vector<std::size_t> order(batch);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
      bool samples_grew = false;
      for (std::size_t i : order) {
        if (scores[i] > cfg_.certify_threshold) break;
        auto result = attempt(proposals[i], out, samples_grew);
        if (result) {
          out.status = SearchStatus::Certified;
          out.best_schedule = std::move(result);
          return out;
        }
        scores[i] = exact_score_;
      }
      if (samples_grew) {
        current_score = float_objective(current, samples_);
        best_score = float_objective(best, samples_);
      }

      const std::size_t chosen = *std::min_element(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b] || (scores[a] == scores[b] && a < b);
      });
      const double delta = scores[chosen] - current_score;
      if (delta <= 0.0 || u < std::exp(-delta / std::max(temperature, 1e-300))) {
        current = std::move(proposals[chosen]);
        current_score = scores[chosen];
        if (current_score < best_score) {
          best = current;
          best_score = current_score;
        }
      }
      temperature *= std::pow(cfg_.cooling, static_cast<double>(batch));
    }

    // Final exact look at the best candidate.
    bool unused = false;
    if (auto result = attempt(best, out, unused)) {
      out.status = SearchStatus::Certified;
      out.best_schedule = std::move(result);
    }
    return out;
  }

private:
  // Snaps and exactly verifies; on failure records the exact score in
  // exact_score_ and feeds the witness position back into the samples.
  std::optional<Schedule> attempt(const FloatSchedule& fs, SearchOutcome& out, bool& samples_grew) {
    ++out.certification_attempts;
    auto snapped = snap_to_grid(fs, specs_, cfg_.grid_denominator);
    if (!snapped) {
      exact_score_ = 1e-6;
      return std::nullopt;
    }
    std::string key = fingerprint(*snapped);
    if (auto it = rejected_.find(key); it != rejected_.end()) {
      exact_score_ = it->second;
      return std::nullopt;
    }
    const Verdict v = verify(*snapped);
    if (v.patrols()) {
      out.best_uncovered_area = Rational(0);
      return snapped;
    }
    out.best_uncovered_area = min(out.best_uncovered_area, v.uncovered_area);
    exact_score_ = std::max(1e-12, (v.uncovered_area / (snapped->fence_length * snapped->period)).to_double()) +
                   cfg_.certify_threshold;
    rejected_.emplace(std::move(key), exact_score_);
    if (add_sample(v.witness->x.to_double())) samples_grew = true;
    return std::nullopt;
  }

  bool add_sample(double x) {
    if (std::find(samples_.begin(), samples_.end(), x) != samples_.end()) return false;
    samples_.push_back(x);
    return true;
  }

  static std::string fingerprint(const Schedule& s) {
    std::string key;
    for (const auto& a : s.agents) {
      for (const auto& bp : a.trajectory.breakpoints()) {
        key += bp.t.to_string();
        key += ',';
        key += bp.x.to_string();
        key += ';';
      }
      key += '|';
    }
    return key;
  }

  void score_all(const std::vector<FloatSchedule>& proposals, std::vector<double>& scores) {
    scores.assign(proposals.size(), 0.0);
    const std::size_t workers = std::min<std::size_t>(std::max(cfg_.workers, 1U), proposals.size());
    if (workers <= 1) {
      for (std::size_t i = 0; i < proposals.size(); ++i) scores[i] = float_objective(proposals[i], samples_);
      return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < proposals.size(); i += workers) {
          scores[i] = float_objective(proposals[i], samples_);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  double on_grid(double v) const {
    const double d = static_cast<double>(cfg_.grid_denominator);
    return static_cast<double>(std::llround(v * d)) / d;
  }
  // Step multiplier spread log-uniformly over three decades.
  double scale() { return std::pow(10.0, -3.0 * uniform()); }

  void mutate(FloatSchedule& fs) {
    FloatAgent& a = fs.agents[pick(fs.agents.size())];
    const std::size_t n = a.t.size();
    const double r = uniform();
    if (r < 0.45 || n == 1) {
      const std::size_t j = pick(n);
      const auto [lo, hi] = position_range(a, j, period_, length_);
      if (lo > hi) return;
      double x = a.x[j] + 0.1 * length_ * scale() * gaussian();
      if (uniform() < 0.3) x = on_grid(x);
      a.x[j] = std::clamp(x, lo, hi);
    } else if (r < 0.5) {
      // Round one agent onto the grid; kept only if it stays speed-feasible.
      FloatAgent snapped = a;
      for (std::size_t j = 0; j < n; ++j) {
        snapped.t[j] = on_grid(snapped.t[j]);
        snapped.x[j] = std::clamp(on_grid(snapped.x[j]), 0.0, length_);
      }
      normalize_times(snapped, period_);
      for (std::size_t j = 0; j < snapped.t.size(); ++j) {
        const auto [lo, hi] = position_range(snapped, j, period_, length_);
        if (snapped.x[j] < lo - 1e-12 || snapped.x[j] > hi + 1e-12) return;
      }
      a = std::move(snapped);
    } else if (r < 0.65) {
      const std::size_t j = pick(n);
      const std::size_t prev = (j + n - 1) % n;
      const std::size_t next = (j + 1) % n;
      const double t_prev = j == 0 ? a.t[prev] - period_ : a.t[prev];
      const double t_next = next == 0 ? a.t[0] + period_ : a.t[next];
      const double margin = 1e-9 * period_;
      const double old_t = a.t[j];
      const double old_x = a.x[j];
      double t = a.t[j] + 0.05 * period_ * scale() * gaussian();
      if (uniform() < 0.3) t = on_grid(t);
      a.t[j] = std::clamp(t, t_prev + margin, t_next - margin);
      const auto [lo, hi] = position_range(a, j, period_, length_);
      if (lo <= hi) {
        a.x[j] = std::clamp(a.x[j], lo, hi);
        normalize_times(a, period_);
      } else {
        a.t[j] = old_t;
        a.x[j] = old_x;
      }
    } else if (r < 0.8) {
      double shift = 0.1 * period_ * scale() * gaussian();
      if (uniform() < 0.3) {
        shift = static_cast<double>(std::llround(shift * static_cast<double>(cfg_.grid_denominator))) /
                static_cast<double>(cfg_.grid_denominator);
      }
      for (auto& t : a.t) t += shift;
      normalize_times(a, period_);
    } else if (r < 0.9) {
      if (n >= 2 * std::max<std::size_t>(cfg_.waypoints_per_agent, 1)) return;
      const std::size_t j = pick(n);
      const std::size_t k = (j + 1) % n;
      const double tk = k == 0 ? a.t[0] + period_ : a.t[k];
      const double tm = a.t[j] + (tk - a.t[j]) * (0.25 + 0.5 * uniform());
      const double xm = a.x[j] + (a.x[k] - a.x[j]) * (tm - a.t[j]) / (tk - a.t[j]);
      a.t.insert(a.t.begin() + static_cast<std::ptrdiff_t>(j + 1), tm);
      a.x.insert(a.x.begin() + static_cast<std::ptrdiff_t>(j + 1), xm);
      normalize_times(a, period_);
    } else {
      if (n <= 1) return;
      const std::size_t j = pick(n);
      const double old_t = a.t[j];
      const double old_x = a.x[j];
      a.t.erase(a.t.begin() + static_cast<std::ptrdiff_t>(j));
      a.x.erase(a.x.begin() + static_cast<std::ptrdiff_t>(j));
      const std::size_t m = a.t.size();
      if (m >= 2) {
        const std::size_t prev = (j + m - 1) % m;
        const std::size_t next = j % m;
        const double dt = next == 0 ? a.t[0] + period_ - a.t[prev] : a.t[next] - a.t[prev];
        if (std::abs(a.x[next] - a.x[prev]) > a.speed * dt) {
          a.t.insert(a.t.begin() + static_cast<std::ptrdiff_t>(j), old_t);
          a.x.insert(a.x.begin() + static_cast<std::ptrdiff_t>(j), old_x);
        }
      }
    }
  }

  const std::vector<AgentSpec>& specs_;
  const SearchConfig& cfg_;
  std::mt19937_64 rng_;
  double length_ = 0;
  double period_ = 1;
  std::vector<double> samples_;
  std::unordered_map<std::string, double> rejected_;
  double exact_score_ = 0;
};

}  // namespace

SearchOutcome search(const std::vector<AgentSpec>& specs, const Rational& target_length, const SearchConfig& cfg) {
  if (target_length.sign() <= 0) throw std::domain_error("search: target length must be positive");
  if (specs.empty()) throw std::domain_error("search: need at least one agent");
  Schedule initial = cfg.warm_start ? *cfg.warm_start : stretched_partition_schedule(specs, target_length);
  if (cfg.warm_start) {
    if (initial.fence_length != target_length) {
      throw std::domain_error("search: warm start fence length differs from the target");
    }
    if (specs_of(initial) != specs) throw std::domain_error("search: warm start agents differ from specs");
    require_valid(initial);
  }
  Annealer annealer(specs, target_length, cfg);
  return annealer.run(initial);
}

// ---------------------------------------------------------------------------
// Harnesses

namespace {

Rational random_rational(std::mt19937_64& rng, long max_num, long max_den) {
  const long num = std::uniform_int_distribution<long>(1, max_num)(rng);
  const long den = std::uniform_int_distribution<long>(1, max_den)(rng);
  return Rational(num, den);
}

std::vector<AgentSpec> random_specs(std::mt19937_64& rng, std::size_t k, WeightMode weights, SpeedMode speeds) {
  std::vector<AgentSpec> out;
  const Rational shared = random_rational(rng, 12, 4);
  for (std::size_t i = 0; i < k; ++i) {
    Rational v = speeds == SpeedMode::Equal ? shared : random_rational(rng, 12, 4);
    Rational w = weights == WeightMode::Random ? random_rational(rng, 6, 3) : Rational(1);
    out.emplace_back(std::move(v), std::move(w));
  }
  return out;
}

}  // namespace

FalsifyReport falsify_bound(std::size_t k, WeightMode weight_mode, std::size_t trials, const SearchConfig& cfg,
                            SpeedMode speed_mode) {
  if (k == 0) throw std::domain_error("falsify_bound: k must be positive");
  FalsifyReport report;
  std::mt19937_64 rng(splitmix64(cfg.seed ^ 0x5fa15f1ULL));
  for (std::size_t trial = 0; trial < trials; ++trial) {
    FalsifyTrial t;
    t.specs = random_specs(rng, k, weight_mode, speed_mode);
    t.target = bounds(t.specs).partition_length * Rational(101, 100);
    SearchConfig trial_cfg = cfg;
    trial_cfg.seed = splitmix64(cfg.seed + trial);
    trial_cfg.warm_start.reset();
    t.status = search(t.specs, t.target, trial_cfg).status;
    ++report.trials;
    if (t.status == SearchStatus::Certified) ++report.certifications;
    report.results.push_back(std::move(t));
  }
  return report;
}

RatioResult improve_ratio(std::size_t k_max, const SearchConfig& cfg, const std::vector<Schedule>& warm_starts) {
  std::mt19937_64 rng(splitmix64(cfg.seed ^ 0x4a710ULL));
  std::optional<RatioResult> best;
  auto offer = [&](const Schedule& s) {
    const Rational r = ratio(s);
    if (!best || r > best->ratio) best = RatioResult{r, s};
  };
  // Pushes a certified schedule's length up by 1% steps while search succeeds.
  auto push = [&](Schedule s) {
    SearchConfig step_cfg = cfg;
    for (int step = 0; step < 3; ++step) {
      Schedule longer = s;
      longer.fence_length = s.fence_length * Rational(101, 100);
      step_cfg.warm_start = longer;
      step_cfg.seed = splitmix64(step_cfg.seed);
      const SearchOutcome o = search(specs_of(longer), longer.fence_length, step_cfg);
      if (o.status != SearchStatus::Certified) return;
      s = *o.best_schedule;
      offer(s);
    }
  };

  for (const auto& ws : warm_starts) {
    if (!verify(ws).patrols()) continue;
    offer(ws);
    push(ws);
  }
  for (std::size_t k = 1; k <= k_max; ++k) {
    for (int tuple = 0; tuple < 2; ++tuple) {
      const auto specs = random_specs(rng, k, WeightMode::Unit, SpeedMode::Random);
      const Schedule p = partition_schedule(specs);
      offer(p);
      push(p);
    }
  }
  if (!best) throw std::logic_error("improve_ratio: no certified schedule");
  return *best;
}

}  // namespace fence
