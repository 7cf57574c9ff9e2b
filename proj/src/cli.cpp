#include "elliptic/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "elliptic/conditions.hpp"
#include "elliptic/errors.hpp"
#include "elliptic/format.hpp"
#include "elliptic/oracle.hpp"
#include "elliptic/solver.hpp"

namespace elliptic::cli {

namespace {

std::shared_ptr<spdlog::logger> logger() {
  if (auto existing = spdlog::get("elliptic")) return existing;
  auto created = spdlog::stderr_logger_mt("elliptic");
  created->set_pattern("[%l] %v");
  created->set_level(spdlog::level::info);
  return created;
}

std::filesystem::path output_path(const Context& ctx, const std::string& name) {
  const std::filesystem::path p(name);
  return p.is_absolute() ? p : ctx.out_dir / p;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write output file '" + path.string() + "'", 0);
  out << content;
  if (!out) throw ConfigError("failed while writing '" + path.string() + "'", 0);
  logger()->info("wrote {}", path.string());
}

std::string report_header(const Context& ctx, std::string_view command) {
  std::ostringstream os;
  os << "# elliptic report\n# command: " << command << "\n# resolved config:\n";
  std::istringstream cfg(dump_config(ctx.config));
  for (std::string line; std::getline(cfg, line);) os << "#   " << line << '\n';
  return os.str();
}

void append_key_values(std::ostringstream& os, const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
}

std::string join_deltas(const std::vector<double>& deltas) {
  std::string s;
  for (std::size_t i = 0; i < deltas.size(); ++i) s += (i ? " " : "") + format_double(deltas[i]);
  return s;
}

void append_outcome(std::ostringstream& os, const std::string& prefix, const SolveOutcome& out) {
  os << prefix << "status = " << to_string(out.status) << '\n';
  os << prefix << "iterations = " << out.iterations << '\n';
  os << prefix << "base = " << format_double(out.fixed_point.base) << '\n';
  os << prefix << "tol = " << format_double(out.tol) << '\n';
  os << prefix << "residual = " << format_double(out.residual) << '\n';
  os << prefix << "tail_slope = " << format_double(out.tail_slope) << '\n';
  os << prefix << "sum_at_rmax = " << format_double(out.sum_at_rmax()) << '\n';
  os << prefix << "invariant_violations = monotone_in_k " << out.violations.monotone_in_k << ", floor "
     << out.violations.floor << ", monotone_in_r " << out.violations.monotone_in_r << " over "
     << out.violations.steps << " steps\n";
  os << prefix << "sup_deltas = " << join_deltas(out.sup_deltas) << '\n';
}

std::string solution_csv(const SolveOutcome& lower, const SolveOutcome* upper) {
  const IterateField& w = lower.fixed_point;
  const RadialGrid& grid = *w.grid();
  std::string csv = "r";
  for (std::size_t i = 0; i < w.size(); ++i) csv += ",w_" + std::to_string(i + 1);
  if (upper) {
    for (std::size_t i = 0; i < w.size(); ++i) csv += ",v_" + std::to_string(i + 1);
  }
  csv += '\n';
  for (std::size_t n = 0; n < grid.size(); ++n) {
    csv += format_double(grid.node(n));
    for (const RadialFunction& c : w.components) csv += ',' + format_double(c.values[n]);
    if (upper) {
      for (const RadialFunction& c : upper->fixed_point.components) csv += ',' + format_double(c.values[n]);
    }
    csv += '\n';
  }
  return csv;
}

std::string trajectory_csv(const ShootingResult& shot) {
  const RadialGrid& grid = *shot.trajectory.front().grid;
  std::string csv = "r";
  for (std::size_t i = 0; i < shot.trajectory.size(); ++i) csv += ",u_" + std::to_string(i + 1);
  csv += '\n';
  for (std::size_t n = 0; n < grid.size(); ++n) {
    csv += format_double(grid.node(n));
    for (const RadialFunction& c : shot.trajectory) csv += ',' + format_double(c.values[n]);
    csv += '\n';
  }
  return csv;
}

int verdict_exit(const ConditionReport& report) {
  return report.classification.verdict == Verdict::Inconclusive ? kInconclusive : kSuccess;
}

struct SweepRow {
  std::vector<double> point;
  std::string verdict, keller_osserman, status;
  double sum_at_rmax = 0.0;
  std::size_t iterations = 0;
  std::string error;
};

}  // namespace

void configure_logging(const std::string& level) {
  std::string chosen = level;
  if (chosen.empty()) {
    const char* env = std::getenv("ELLIPTIC_LOG");
    chosen = env ? env : "info";
  }
  auto log = logger();
  if (chosen == "quiet") {
    log->set_level(spdlog::level::off);
  } else if (chosen == "debug") {
    log->set_level(spdlog::level::debug);
  } else {
    log->set_level(spdlog::level::info);
    if (chosen != "info") log->warn("unknown ELLIPTIC_LOG value '{}', using info", chosen);
  }
}

int cmd_check(const Context& ctx) {
  const ProblemSpec spec = ctx.config.problem();
  const ConditionReport report = evaluate_conditions(spec);
  const auto kv = to_key_values(report);
  std::ostringstream os;
  os << report_header(ctx, "check") << "[conditions]\n";
  append_key_values(os, kv);
  write_file(output_path(ctx, ctx.config.outputs.report), os.str());
  for (const auto& [k, v] : kv) std::cout << k << " = " << v << '\n';
  logger()->info("classification {}", to_string(report.classification.verdict));
  return verdict_exit(report);
}

int cmd_classify(const Context& ctx) {
  const ProblemSpec spec = ctx.config.problem();
  const ConditionReport report = evaluate_conditions(spec);
  const Classification& c = report.classification;
  std::ostringstream os;
  os << report_header(ctx, "classify") << "[classification]\n";
  os << "verdict = " << to_string(c.verdict) << '\n';
  os << "clause = " << c.clause << '\n';
  for (std::size_t i = 0; i < c.applicable.size(); ++i) {
    os << "applicable." << i + 1 << " = " << to_string(c.applicable[i]) << ": " << c.clauses[i] << '\n';
  }
  for (std::size_t i = 0; i < c.notes.size(); ++i) os << "note." << i + 1 << " = " << c.notes[i] << '\n';
  os << "[conditions_csv]\n";
  for (const std::string& row : to_csv_rows(report)) os << row << '\n';
  write_file(output_path(ctx, ctx.config.outputs.report), os.str());
  std::cout << "verdict = " << to_string(c.verdict) << '\n';
  for (Verdict v : c.applicable) std::cout << "applicable = " << to_string(v) << '\n';
  return verdict_exit(report);
}

int cmd_solve(const Context& ctx) {
  const RunConfig& cfg = ctx.config;
  const ProblemSpec spec = cfg.problem();
  const ConditionReport report = evaluate_conditions(spec);
  const Verdict verdict = report.classification.verdict;

  std::ostringstream os;
  os << report_header(ctx, "solve") << "[conditions]\n";
  append_key_values(os, to_key_values(report));
  os << "[solve]\n";

  std::string gate;
  if (verdict == Verdict::Inconclusive) gate = "classification is Inconclusive";
  if (!audit_passes(report.audit)) gate = "the hypothesis audit did not pass";
  if (!gate.empty() && !ctx.force) {
    os << "skipped = " << gate << "; rerun with --force to solve anyway\n";
    write_file(output_path(ctx, cfg.outputs.report), os.str());
    logger()->warn("solve skipped: {} (use --force)", gate);
    std::cout << "status = skipped\n";
    return kInconclusive;
  }
  if (!gate.empty()) os << "forced = " << gate << '\n';

  const GridPtr grid = cfg.make_grid();
  const SolveOptions opts = cfg.solve_options();
  const SolveOutcome lower = solve_lower(spec, grid, opts);
  logger()->info("lower envelope: {} after {} iterations", to_string(lower.status), lower.iterations);
  append_outcome(os, "lower.", lower);

  std::optional<UpperSolve> upper;
  if (lower.converged() && verdict == Verdict::BoundedExists) {
    upper = solve_upper(spec, lower, upper_base(lower), opts);
    logger()->info("upper envelope: {} after {} iterations", to_string(upper->outcome.status),
                   upper->outcome.iterations);
    os << "upper.M = " << format_double(upper->M) << '\n';
    os << "upper.sandwich_margin = " << format_double(upper->sandwich_margin) << '\n';
    os << "upper.lower_tail_slope = " << format_double(upper->lower_tail_slope) << '\n';
    append_outcome(os, "upper.", upper->outcome);
  }
  if (spec.is_radial()) {
    const LargenessReport large = detect_largeness(lower, spec, opts);
    os << "largeness.trend = " << to_string(large.trend) << '\n';
    for (std::size_t i = 0; i < large.sums.size(); ++i) {
      os << "largeness.sum_at_" << format_double(large.radii[i]) << " = " << format_double(large.sums[i]) << '\n';
    }
    os << "largeness.last_relative_increment = " << format_double(large.last_relative_increment) << '\n';
    os << "largeness.lower_bound = " << format_double(large.lower_bound)
       << (large.lower_bound_holds ? " (respected)" : " (violated)") << '\n';
    if (!large.note.empty()) os << "largeness.note = " << large.note << '\n';
  }

  write_file(output_path(ctx, cfg.outputs.solution_csv), solution_csv(lower, upper ? &upper->outcome : nullptr));
  write_file(output_path(ctx, cfg.outputs.report), os.str());
  std::cout << "status = " << to_string(lower.status) << '\n';

  const bool bounded_predicted = verdict == Verdict::BoundedExists;
  auto outcome_exit = [bounded_predicted](const SolveOutcome& o) {
    switch (o.status) {
      case SolveStatus::converged: return int{kSuccess};
      case SolveStatus::max_iterations: return int{kNonConvergence};
      case SolveStatus::blow_up_detected: return bounded_predicted ? int{kNonConvergence} : int{kSuccess};
    }
    return int{kNonConvergence};
  };
  int rc = outcome_exit(lower);
  if (rc == kSuccess && upper) rc = outcome_exit(upper->outcome);
  return rc;
}

int cmd_sweep(const Context& ctx) {
  const RunConfig& cfg = ctx.config;
  const auto& axes = cfg.sweep;

  // Cartesian product in lexicographic order, first axis slowest.
  std::vector<std::vector<double>> points{{}};
  for (const SweepAxis& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& p : points) {
      for (double v : axis.values) {
        next.push_back(p);
        next.back().push_back(v);
      }
    }
    points = std::move(next);
  }

  std::vector<ProblemSpec> specs;
  specs.reserve(points.size());
  for (const auto& point : points) {
    std::vector<ComponentConfig> comps = cfg.components;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      for (std::size_t i = 0; i < comps.size(); ++i) {
        if (axes[a].component && *axes[a].component != i + 1) continue;
        FamilyRef& ref = axes[a].target == SweepAxis::Target::coefficient ? comps[i].coefficient : comps[i].nonlinearity;
        ref.params[axes[a].param] = point[a];
      }
    }
    try {
      specs.push_back(cfg.problem(comps));
    } catch (const ConfigError& e) {
      std::string where;
      for (std::size_t a = 0; a < axes.size(); ++a) where += (a ? ", " : "") + axes[a].name + "=" + format_double(point[a]);
      throw ConfigError("sweep cell (" + where + "): " + e.what(), axes.empty() ? e.line() : axes.front().line);
    }
  }

  const GridPtr grid = cfg.make_grid();
  SolveOptions opts = cfg.solve_options();
  opts.kernel = Kernel::serial;
  std::vector<SweepRow> rows(points.size());
  const auto cells = static_cast<long long>(points.size());
#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < cells; ++c) {
    const auto idx = static_cast<std::size_t>(c);
    SweepRow& row = rows[idx];
    row.point = points[idx];
    try {
      const ConditionReport report = evaluate_conditions(specs[idx]);
      row.verdict = to_string(report.classification.verdict);
      row.keller_osserman = to_string(report.keller_osserman.status);
      const SolveOutcome out = solve_lower(specs[idx], grid, opts);
      row.status = to_string(out.status);
      row.sum_at_rmax = out.sum_at_rmax();
      row.iterations = out.iterations;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }

  std::string csv;
  for (const SweepAxis& axis : axes) csv += axis.name + ',';
  csv += "verdict,keller_osserman,solver_status,sum_w_rmax,iterations\n";
  for (const SweepRow& row : rows) {
    if (!row.error.empty()) throw ConfigError("sweep cell failed: " + row.error, 0);
    for (double v : row.point) csv += format_double(v) + ',';
    csv += row.verdict + ',' + row.keller_osserman + ',' + row.status + ',' + format_double(row.sum_at_rmax) + ',' +
           std::to_string(row.iterations) + '\n';
  }
  write_file(output_path(ctx, cfg.outputs.sweep_csv), csv);
  std::ostringstream os;
  os << report_header(ctx, "sweep") << "[sweep]\ncells = " << rows.size() << '\n';
  write_file(output_path(ctx, cfg.outputs.report), os.str());
  std::cout << "cells = " << rows.size() << '\n';
  return kSuccess;
}

int cmd_oracle(const Context& ctx) {
  const RunConfig& cfg = ctx.config;
  const ProblemSpec spec = cfg.problem();
  const GridPtr grid = cfg.make_grid();
  const SolveOptions opts = cfg.solve_options();
  const SolveOutcome picard = solve_lower(spec, grid, opts);
  const std::vector<double> initial(spec.components(), picard.fixed_point.base);
  const ShootingResult shot = shoot(spec, initial, grid, Profile::sphere_max, opts.blow_up_ceiling);
  const CrossValidation cv = cross_validate(picard, shot, cfg.oracle.threshold);

  std::ostringstream os;
  os << report_header(ctx, "oracle") << "[oracle]\n";
  append_outcome(os, "picard.", picard);
  os << "shoot.method_order = " << shot.method_order << '\n';
  os << "shoot.step_size = " << format_double(shot.step_size) << '\n';
  os << "shoot.blow_up = " << (shot.blow_up ? "true" : "false") << '\n';
  os << "cross.sup_abs = " << format_double(cv.sup_abs) << '\n';
  os << "cross.sup_rel = " << format_double(cv.sup_rel) << '\n';
  os << "cross.threshold = " << format_double(cv.threshold) << '\n';
  os << "cross.compared_nodes = " << cv.compared_nodes << '\n';
  os << "cross.prefix_only = " << (cv.prefix_only ? "true" : "false") << '\n';
  os << "cross.passed = " << (cv.passed ? "true" : "false") << '\n';
  os << "cross.note = " << cv.note << '\n';
  write_file(output_path(ctx, cfg.outputs.oracle_csv), trajectory_csv(shot));
  write_file(output_path(ctx, cfg.outputs.report), os.str());
  std::cout << "sup_rel = " << format_double(cv.sup_rel) << '\n' << "passed = " << (cv.passed ? "true" : "false") << '\n';
  if (!cv.passed) logger()->warn("oracle disagreement: sup_rel {} >= {}", cv.sup_rel, cv.threshold);
  return cv.passed ? kSuccess : kOracleDisagreement;
}

int run(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Successive-approximation solver and classifier for radial semilinear elliptic systems"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir = ".";
  bool force = false;
  double epsilon = 0.0, r_max = 0.0;
  std::size_t nodes = 0;
  struct Flags {
    CLI::Option *epsilon, *r_max, *nodes;
  };
  std::vector<std::pair<CLI::App*, Flags>> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"check", "evaluate the integral criteria and write the condition report"},
      {"solve", "run the lower (and upper) envelope solves and write the solution CSV"},
      {"classify", "print the classification verdict"},
      {"sweep", "classify and solve every cell of the configured parameter sweep"},
      {"oracle", "cross-check the Picard fixed point against direct ODE integration"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "YAML run configuration")->required();
    sub->add_flag("--force", force, "solve even when the classification gate fails");
    Flags f{};
    f.epsilon = sub->add_option("--epsilon", epsilon, "override problem.epsilon");
    f.r_max = sub->add_option("--rmax", r_max, "override grid.r_max");
    f.nodes = sub->add_option("--nodes", nodes, "override grid.n_nodes");
    sub->add_option("--out", out_dir, "directory for relative output paths");
    subs.emplace_back(sub, f);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kConfigError;
  }

  try {
    Context ctx;
    std::string command;
    for (const auto& [sub, flags] : subs) {
      if (!sub->parsed()) continue;
      command = sub->get_name();
      ctx.config = load_config(config_path);
      if (*flags.epsilon) ctx.config.epsilon = epsilon;
      if (*flags.r_max) ctx.config.grid.r_max = r_max;
      if (*flags.nodes) ctx.config.grid.n_nodes = nodes;
    }
    ctx.config.validate();
    ctx.out_dir = out_dir;
    ctx.force = force;
    logger()->debug("resolved config:\n{}", dump_config(ctx.config));
    if (command == "check") return ctx.config.mode = Mode::check, cmd_check(ctx);
    if (command == "solve") return ctx.config.mode = Mode::solve, cmd_solve(ctx);
    if (command == "classify") return ctx.config.mode = Mode::classify, cmd_classify(ctx);
    if (command == "sweep") return ctx.config.mode = Mode::sweep, cmd_sweep(ctx);
    ctx.config.mode = Mode::oracle;
    return cmd_oracle(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << config_path;
    if (e.line() > 0) std::cerr << ':' << e.line();
    std::cerr << ": " << e.what() << '\n';
    return kConfigError;
  } catch (const PreconditionError& e) {
    std::cerr << "config error: " << config_path << ": " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNonConvergence;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("elliptic");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace elliptic::cli
