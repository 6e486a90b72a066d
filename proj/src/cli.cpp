#include "fence/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fence/coverage.hpp"
#include "fence/document.hpp"
#include "fence/render.hpp"
#include "fence/search.hpp"
#include "fence/strategies.hpp"

namespace fence {

namespace {

// Any failure that should end the command with exit status 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Rational> parse_list(const std::string& text, const std::string& flag) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(Rational::parse(item));
    } catch (const std::exception& e) {
      throw InputError(flag + ": " + e.what());
    }
  }
  if (out.empty()) throw InputError(flag + ": empty list");
  return out;
}

Rational parse_one(const std::string& text, const std::string& flag) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw InputError(flag + ": " + e.what());
  }
}

std::vector<AgentSpec> parse_specs(const std::string& speeds, const std::string& weights) {
  const auto v = parse_list(speeds, "--speeds");
  std::vector<Rational> w(v.size(), Rational(1));
  if (!weights.empty()) {
    w = parse_list(weights, "--weights");
    if (w.size() != v.size()) throw InputError("--weights: expected one weight per speed");
  }
  std::vector<AgentSpec> specs;
  for (std::size_t i = 0; i < v.size(); ++i) {
    try {
      specs.emplace_back(v[i], w[i]);
    } catch (const std::invalid_argument& e) {
      throw InputError("agent " + std::to_string(i) + ": " + e.what());
    }
  }
  return specs;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string describe(const Violation& v) {
  std::string where;
  if (v.agent) where += "agents[" + std::to_string(*v.agent) + "]";
  if (v.segment) where += " segment " + std::to_string(*v.segment);
  return where.empty() ? v.message : where + ": " + v.message;
}

// Loads and validates a document; throws InputError naming the first problem.
Schedule load_schedule(const std::string& path) {
  try {
    Schedule s = to_schedule(parse_document(read_file(path)));
    const auto violations = validate_schedule(s);
    if (!violations.empty()) throw InputError("invalid schedule: " + describe(violations.front()));
    return s;
  } catch (const DocumentError& e) {
    throw InputError(path + ": " + e.what());
  }
}

int cmd_verify(const std::string& path, std::ostream& out) {
  const Schedule s = load_schedule(path);
  const Verdict v = verify(s);
  out << (v.patrols() ? "PATROLS" : "FAILS") << " l=" << s.fence_length << " ratio=" << ratio(s) << "\n";
  out << "period=" << s.period << " agents=" << s.agents.size() << "\n";
  if (v.witness) out << "witness x=" << v.witness->x << " t*=" << v.witness->t_star << "\n";
  out << "uncovered_area=" << v.uncovered_area << "\n";
  if (!v.patrols()) out << "uncovered_regions=" << v.regions.size() << "\n";
  const bool equal_weights = std::all_of(s.agents.begin(), s.agents.end(), [&](const Agent& a) {
    return a.spec.weight() == s.agents.front().spec.weight();
  });
  if (equal_weights) {
    const IdleProfile p = idle_profile(s);
    if (p.global_max) {
      out << "idle_max=" << *p.global_max << " at x=" << p.argmax_x << "\n";
    } else {
      out << "idle_max=unbounded at x=" << p.argmax_x << "\n";
    }
  }
  return v.patrols() ? kExitOk : kExitNegative;
}

int emit_certified(const Schedule& s, DocumentMetadata meta, std::ostream& out, std::ostream& err) {
  const Verdict v = verify(s);
  if (!v.patrols()) {
    err << "refusing to emit: schedule does not patrol l=" << s.fence_length << "\n";
    return kExitNegative;
  }
  out << emit_document(to_document(s, std::move(meta)));
  return kExitOk;
}

struct BuildArgs {
  std::string kind;
  std::string speeds;
  std::string weights;
  std::string length;
  std::string order = "input";
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
  DocumentMetadata meta;
  meta.name = a.kind;
  Schedule s;
  if (a.kind == "partition") {
    if (a.speeds.empty()) throw InputError("build partition: --speeds is required");
    const auto specs = parse_specs(a.speeds, a.weights);
    std::optional<Rational> length;
    if (!a.length.empty()) length = parse_one(a.length, "--length");
    const SegmentOrder order = a.order == "speed" ? SegmentOrder::BySpeed : SegmentOrder::Input;
    try {
      s = partition_schedule(specs, length, order);
    } catch (const std::domain_error& e) {
      throw InputError(e.what());
    }
    meta.provenance = "partition strategy, segments proportional to v*T";
  } else {
    if (!a.speeds.empty() || !a.weights.empty() || !a.length.empty()) {
      throw InputError("build " + a.kind + ": takes no --speeds, --weights or --length");
    }
    if (a.kind == "fig1") {
      s = fig1_schedule();
      meta.provenance = "six unit-weight agents, speeds 1,1,1,1,7/3,1/2, ratio 21/41";
    } else if (a.kind == "fig2") {
      s = fig2_schedule();
      meta.provenance = "nine unit-weight agents, speeds 5 (x6) and 1 (x3), period 10/3";
    } else {
      s = weighted_three_schedule();
      meta.provenance = "three agents (1, T=4), (7/3, T=1), (1/2, T=1)";
    }
  }
  return emit_certified(s, std::move(meta), out, err);
}

struct SearchArgs {
  std::string speeds;
  std::string weights;
  std::string length;
  std::string warm_start;
  std::uint64_t seed = 1;
  std::size_t budget = 10000;
  unsigned workers = 1;
  long grid = 840;
};

int cmd_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<Schedule> warm;
  if (!a.warm_start.empty()) warm = load_schedule(a.warm_start);
  std::vector<AgentSpec> specs;
  if (!a.speeds.empty()) {
    specs = parse_specs(a.speeds, a.weights);
  } else if (warm) {
    specs = specs_of(*warm);
  } else {
    throw InputError("search: --speeds or --warm-start is required");
  }
  Rational target;
  if (!a.length.empty()) {
    target = parse_one(a.length, "--length");
  } else if (warm) {
    target = warm->fence_length;
  } else {
    throw InputError("search: --length is required");
  }
  if (target.sign() <= 0) throw InputError("--length: must be positive");
  if (a.grid <= 0) throw InputError("--grid: must be positive");

  SearchConfig cfg;
  cfg.seed = a.seed;
  cfg.budget = a.budget;
  cfg.workers = std::max(1u, a.workers);
  cfg.grid_denominator = a.grid;
  cfg.warm_start = warm;
  SearchOutcome outcome;
  try {
    outcome = search(specs, target, cfg);
  } catch (const std::domain_error& e) {
    throw InputError(e.what());
  }
  if (outcome.status != SearchStatus::Certified) {
    out << "EXHAUSTED evaluations=" << outcome.evaluations << " certification_attempts="
        << outcome.certification_attempts << " best_uncovered_area=" << outcome.best_uncovered_area << "\n";
    return kExitNegative;
  }
  DocumentMetadata meta;
  meta.name = "search";
  meta.provenance = "simulated annealing with exact certification";
  meta.seed = a.seed;
  meta.budget = a.budget;
  meta.grid = a.grid;
  return emit_certified(*outcome.best_schedule, std::move(meta), out, err);
}

struct RenderArgs {
  std::string path;
  std::string out_path;
  unsigned periods = 2;
  double px_space = 100;
  double px_time = 60;
  double opacity = 0.35;
  bool dotted = false;
};

int cmd_render(const RenderArgs& a, std::ostream& out) {
  const Schedule s = load_schedule(a.path);
  RenderOptions opts;
  opts.periods_shown = a.periods;
  opts.pixels_per_unit_space = a.px_space;
  opts.pixels_per_unit_time = a.px_time;
  opts.band_opacity = a.opacity;
  opts.show_dotted_union = a.dotted;
  std::string svg;
  try {
    svg = render_svg(s, opts);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (a.out_path.empty() || a.out_path == "-") {
    out << svg;
    return kExitOk;
  }
  std::ofstream file(a.out_path, std::ios::binary);
  if (!file || !(file << svg) || !file.flush()) throw InputError("cannot write " + a.out_path);
  return kExitOk;
}

int cmd_bounds(const std::string& speeds, const std::string& weights, std::ostream& out) {
  const BoundsReport b = bounds(parse_specs(speeds, weights));
  out << "partition_length=" << b.partition_length << " (" << b.partition_length.to_decimal(6) << ")\n";
  out << "trivial_upper=" << b.trivial_upper << " (" << b.trivial_upper.to_decimal(6) << ")\n";
  return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact construction, verification and search of fence-patrolling schedules", "fencepatrol"};
  app.require_subcommand(1);

  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "Decide whether a schedule document patrols its fence");
  verify_cmd->add_option("path", verify_path, "Schedule document")->required();

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Emit a certified schedule document");
  build_cmd->add_option("kind", build.kind, "partition | fig1 | fig2 | weighted3")
      ->required()
      ->check(CLI::IsMember({"partition", "fig1", "fig2", "weighted3"}));
  build_cmd->add_option("--speeds", build.speeds, "Comma-separated rationals");
  build_cmd->add_option("--weights", build.weights, "Comma-separated rationals (default 1 each)");
  build_cmd->add_option("--length", build.length, "Fence length (default: the partition bound)");
  build_cmd->add_option("--order", build.order, "Segment order: input | speed")
      ->check(CLI::IsMember({"input", "speed"}));

  SearchArgs search_args;
  auto* search_cmd = app.add_subcommand("search", "Search for a schedule patrolling a target length");
  search_cmd->add_option("--speeds", search_args.speeds, "Comma-separated rationals");
  search_cmd->add_option("--weights", search_args.weights, "Comma-separated rationals (default 1 each)");
  search_cmd->add_option("--length", search_args.length, "Target fence length");
  search_cmd->add_option("--warm-start", search_args.warm_start, "Schedule document to start from");
  search_cmd->add_option("--seed", search_args.seed, "Random seed");
  search_cmd->add_option("--budget", search_args.budget, "Candidate evaluations");
  search_cmd->add_option("--workers", search_args.workers, "Evaluation threads (does not change results)");
  search_cmd->add_option("--grid", search_args.grid, "Snap denominator for certified breakpoints");

  RenderArgs render_args;
  auto* render_cmd = app.add_subcommand("render", "Write a space-time diagram as SVG");
  render_cmd->add_option("path", render_args.path, "Schedule document")->required();
  render_cmd->add_option("--out", render_args.out_path, "Output file (default: standard output)");
  render_cmd->add_option("--periods", render_args.periods, "Periods shown")->check(CLI::PositiveNumber);
  render_cmd->add_option("--px-space", render_args.px_space, "Pixels per unit of space")
      ->check(CLI::PositiveNumber);
  render_cmd->add_option("--px-time", render_args.px_time, "Pixels per unit of time")->check(CLI::PositiveNumber);
  render_cmd->add_option("--opacity", render_args.opacity, "Band fill opacity")->check(CLI::Range(0.0, 1.0));
  render_cmd->add_flag("--dotted", render_args.dotted, "Overlay dashed band outlines");

  std::string bound_speeds;
  std::string bound_weights;
  auto* bounds_cmd = app.add_subcommand("bounds", "Print the partition length and the trivial upper bound");
  bounds_cmd->add_option("--speeds", bound_speeds, "Comma-separated rationals")->required();
  bounds_cmd->add_option("--weights", bound_weights, "Comma-separated rationals (default 1 each)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  try {
    if (*verify_cmd) return cmd_verify(verify_path, out);
    if (*build_cmd) return cmd_build(build, out, err);
    if (*search_cmd) return cmd_search(search_args, out, err);
    if (*render_cmd) return cmd_render(render_args, out);
    if (*bounds_cmd) return cmd_bounds(bound_speeds, bound_weights, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidSchedule& e) {
    err << "error: invalid schedule: " << describe(e.violations().front()) << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace fence
