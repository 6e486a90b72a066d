#include "fence/schedule.hpp"

#include <sstream>

namespace fence {

AgentSpec::AgentSpec(Rational speed, Rational weight)
    : speed_(std::move(speed)), weight_(std::move(weight)) {
  if (speed_.sign() <= 0) throw std::invalid_argument("agent speed must be positive");
  if (weight_.sign() <= 0) throw std::invalid_argument("agent weight must be positive");
}

Schedule make_schedule(Rational fence_length, std::vector<Agent> agents) {
  if (agents.empty()) throw std::invalid_argument("schedule needs at least one agent");
  Rational period = agents.front().trajectory.period();
  for (const auto& a : agents) period = rational_lcm(period, a.trajectory.period());
  for (auto& a : agents) {
    if (a.trajectory.period() != period) a.trajectory = a.trajectory.with_period(period);
  }
  return Schedule{std::move(fence_length), std::move(period), std::move(agents)};
}

std::vector<AgentSpec> specs_of(const Schedule& s) {
  std::vector<AgentSpec> out;
  out.reserve(s.agents.size());
  for (const auto& a : s.agents) out.push_back(a.spec);
  return out;
}

std::vector<Violation> validate_schedule(const Schedule& s) {
  std::vector<Violation> out;
  if (s.fence_length.sign() <= 0) {
    out.push_back({ViolationKind::FenceLength, std::nullopt, std::nullopt,
                   "fence length " + s.fence_length.to_string() + " is not positive"});
  }
  if (s.period.sign() <= 0) {
    out.push_back({ViolationKind::Period, std::nullopt, std::nullopt,
                   "period " + s.period.to_string() + " is not positive"});
  }
  if (s.agents.empty()) {
    out.push_back({ViolationKind::Period, std::nullopt, std::nullopt, "schedule has no agents"});
  }
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const Agent& agent = s.agents[i];
    const Trajectory& traj = agent.trajectory;
    if (traj.period() != s.period) {
      out.push_back({ViolationKind::Period, i, std::nullopt,
                     "agent " + std::to_string(i) + ": trajectory period " + traj.period().to_string() +
                         " differs from schedule period " + s.period.to_string()});
    }
    const auto& pts = traj.breakpoints();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (pts[j].x.sign() < 0 || pts[j].x > s.fence_length) {
        out.push_back({ViolationKind::Range, i, j,
                       "agent " + std::to_string(i) + ": breakpoint " + std::to_string(j) + " at x = " +
                           pts[j].x.to_string() + " lies outside [0, " + s.fence_length.to_string() + "]"});
      }
    }
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
      const Rational dx = (pts[j + 1].x - pts[j].x).abs();
      const Rational dt = pts[j + 1].t - pts[j].t;
      if (dx > agent.spec.speed() * dt) {
        out.push_back({ViolationKind::Speed, i, j,
                       "agent " + std::to_string(i) + ": segment " + std::to_string(j) + " needs speed " +
                           (dx / dt).to_string() + " > " + agent.spec.speed().to_string()});
      }
    }
  }
  return out;
}

namespace {

std::string summarize(const std::vector<Violation>& v) {
  std::ostringstream os;
  os << "invalid schedule";
  if (!v.empty()) os << ": " << v.front().message;
  if (v.size() > 1) os << " (and " << v.size() - 1 << " more)";
  return os.str();
}

}  // namespace

InvalidSchedule::InvalidSchedule(std::vector<Violation> violations)
    : std::invalid_argument(summarize(violations)), violations_(std::move(violations)) {}

void require_valid(const Schedule& s) {
  auto v = validate_schedule(s);
  if (!v.empty()) throw InvalidSchedule(std::move(v));
}

}  // namespace fence
