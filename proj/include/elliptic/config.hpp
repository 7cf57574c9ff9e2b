#pragma once

// Run configuration read from a YAML file. Every key is optional except the
// problem components; unknown keys are rejected so that typos surface as
// config errors with a line number. See configs/annotated.yaml.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "elliptic/problem.hpp"
#include "elliptic/radial.hpp"
#include "elliptic/solver.hpp"

namespace elliptic {

enum class Mode { check, solve, classify, sweep, oracle };
std::string_view to_string(Mode m);

struct FamilyRef {
  std::string name;
  std::vector<double> params;
  int line = 0;
};

struct ComponentConfig {
  FamilyRef coefficient;
  FamilyRef nonlinearity;
};

struct SweepAxis {
  enum class Target { coefficient, nonlinearity };
  std::string name;
  Target target = Target::coefficient;
  /// 1-based component; empty applies the value to every component.
  std::optional<std::size_t> component;
  /// 0-based position in the family's params list.
  std::size_t param = 0;
  std::vector<double> values;
  int line = 0;
};

struct RunConfig {
  Mode mode = Mode::check;
  int dimension = 3;
  double epsilon = 0.5;
  std::vector<ComponentConfig> components;

  struct Grid {
    double r_max = 10.0;
    std::size_t n_nodes = 2001;
    Spacing spacing = Spacing::uniform;
  } grid;

  struct Solver {
    /// <= 0 selects the default 1e-10 (1 + base).
    double tol = 0.0;
    std::size_t max_iter = 10000;
    double blow_up_ceiling = 1e12;
    std::optional<double> base_override;
  } solver;

  struct Oracle {
    double threshold = 1e-4;
  } oracle;

  struct Outputs {
    std::string solution_csv = "solution.csv";
    std::string report = "report.txt";
    std::string sweep_csv = "sweep.csv";
    std::string oracle_csv = "oracle.csv";
  } outputs;

  std::vector<SweepAxis> sweep;
  int components_line = 0;

  /// Builds the ProblemSpec; registry or arity problems become ConfigError.
  ProblemSpec problem() const;
  ProblemSpec problem(const std::vector<ComponentConfig>& comps) const;
  GridPtr make_grid() const;
  SolveOptions solve_options() const;
  /// Base of the lower envelope after defaults (1/d unless overridden).
  double resolved_base() const;

  /// Checks ranges that do not need the registry (R_max, n_nodes, ...).
  void validate() const;
};

/// Parses YAML text; throws ConfigError carrying the 1-based line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Deterministic YAML rendering of the fully resolved configuration.
std::string dump_config(const RunConfig& config);

}  // namespace elliptic
