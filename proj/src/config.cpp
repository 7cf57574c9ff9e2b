#include "elliptic/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "elliptic/errors.hpp"
#include "elliptic/format.hpp"

namespace elliptic {

namespace {

int line_of(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

[[noreturn]] void fail(const std::string& what, const YAML::Node& node) {
  throw ConfigError(what, line_of(node));
}

void require_map(const YAML::Node& node, const std::string& key) {
  if (!node.IsMap()) fail("'" + key + "' must be a mapping", node);
}

void reject_unknown(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& entry : node) {
    const std::string key = entry.first.as<std::string>();
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&key](const char* k) { return key == k; });
    if (!known) {
      std::string list;
      for (const char* k : allowed) list += std::string(list.empty() ? "" : ", ") + k;
      fail("unknown key '" + key + "' in " + where + " (expected one of: " + list + ")", entry.first);
    }
  }
}

double as_double(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail("'" + key + "' must be a number", node);
  try {
    return node.as<double>();
  } catch (const YAML::BadConversion&) {
    fail("'" + key + "' must be a number, got '" + node.Scalar() + "'", node);
  }
}

long long as_integer(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail("'" + key + "' must be an integer", node);
  try {
    return node.as<long long>();
  } catch (const YAML::BadConversion&) {
    fail("'" + key + "' must be an integer, got '" + node.Scalar() + "'", node);
  }
}

std::size_t as_count(const YAML::Node& node, const std::string& key) {
  const long long v = as_integer(node, key);
  if (v < 0) fail("'" + key + "' must be nonnegative", node);
  return static_cast<std::size_t>(v);
}

std::string as_string(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) fail("'" + key + "' must be a string", node);
  return node.Scalar();
}

std::vector<double> as_double_list(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) fail("'" + key + "' must be a list of numbers", node);
  std::vector<double> out;
  for (const auto& item : node) out.push_back(as_double(item, key));
  return out;
}

FamilyRef parse_family(const YAML::Node& node, const std::string& key) {
  require_map(node, key);
  reject_unknown(node, key, {"family", "params"});
  FamilyRef ref;
  ref.line = line_of(node);
  if (!node["family"]) fail("'" + key + "' needs a 'family' name", node);
  ref.name = as_string(node["family"], key + ".family");
  if (node["params"]) ref.params = as_double_list(node["params"], key + ".params");
  return ref;
}

void parse_problem(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "problem");
  reject_unknown(node, "problem", {"dimension", "d", "epsilon", "components"});
  if (node["dimension"]) cfg.dimension = static_cast<int>(as_integer(node["dimension"], "problem.dimension"));
  if (node["epsilon"]) cfg.epsilon = as_double(node["epsilon"], "problem.epsilon");
  const YAML::Node comps = node["components"];
  if (!comps) fail("'problem' needs a 'components' list", node);
  if (!comps.IsSequence() || comps.size() == 0) fail("'problem.components' must be a non-empty list", comps);
  cfg.components_line = line_of(comps);
  for (const auto& c : comps) {
    require_map(c, "problem.components[]");
    reject_unknown(c, "problem.components[]", {"coefficient", "nonlinearity"});
    if (!c["coefficient"] || !c["nonlinearity"]) {
      fail("every component needs 'coefficient' and 'nonlinearity'", c);
    }
    cfg.components.push_back({parse_family(c["coefficient"], "coefficient"),
                              parse_family(c["nonlinearity"], "nonlinearity")});
  }
  if (node["d"]) {
    const std::size_t d = as_count(node["d"], "problem.d");
    if (d != cfg.components.size()) {
      fail("'problem.d' = " + std::to_string(d) + " but " + std::to_string(cfg.components.size()) +
               " components are listed",
           node["d"]);
    }
  }
}

void parse_grid(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "grid");
  reject_unknown(node, "grid", {"r_max", "n_nodes", "spacing"});
  if (node["r_max"]) cfg.grid.r_max = as_double(node["r_max"], "grid.r_max");
  if (node["n_nodes"]) cfg.grid.n_nodes = as_count(node["n_nodes"], "grid.n_nodes");
  if (node["spacing"]) {
    const std::string s = as_string(node["spacing"], "grid.spacing");
    if (s == "uniform") {
      cfg.grid.spacing = Spacing::uniform;
    } else if (s == "graded") {
      cfg.grid.spacing = Spacing::graded;
    } else {
      fail("'grid.spacing' must be 'uniform' or 'graded', got '" + s + "'", node["spacing"]);
    }
  }
  if (!(cfg.grid.r_max > 0.0) || !std::isfinite(cfg.grid.r_max)) fail("'grid.r_max' must be > 0", node);
  if (cfg.grid.n_nodes < RadialGrid::kMinNodes) fail("'grid.n_nodes' must be >= 16", node);
}

void parse_solver(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "solver");
  reject_unknown(node, "solver", {"tol", "max_iter", "blow_up_ceiling", "base_override"});
  if (node["tol"]) cfg.solver.tol = as_double(node["tol"], "solver.tol");
  if (node["max_iter"]) cfg.solver.max_iter = as_count(node["max_iter"], "solver.max_iter");
  if (node["blow_up_ceiling"]) cfg.solver.blow_up_ceiling = as_double(node["blow_up_ceiling"], "solver.blow_up_ceiling");
  if (node["base_override"] && !node["base_override"].IsNull()) {
    cfg.solver.base_override = as_double(node["base_override"], "solver.base_override");
  }
}

void parse_outputs(const YAML::Node& node, RunConfig& cfg) {
  require_map(node, "outputs");
  reject_unknown(node, "outputs", {"solution_csv", "report", "sweep_csv", "oracle_csv"});
  if (node["solution_csv"]) cfg.outputs.solution_csv = as_string(node["solution_csv"], "outputs.solution_csv");
  if (node["report"]) cfg.outputs.report = as_string(node["report"], "outputs.report");
  if (node["sweep_csv"]) cfg.outputs.sweep_csv = as_string(node["sweep_csv"], "outputs.sweep_csv");
  if (node["oracle_csv"]) cfg.outputs.oracle_csv = as_string(node["oracle_csv"], "outputs.oracle_csv");
}

void parse_sweep(const YAML::Node& node, RunConfig& cfg) {
  if (!node.IsSequence()) fail("'sweep' must be a list of axes", node);
  std::set<std::string> names;
  for (const auto& a : node) {
    require_map(a, "sweep[]");
    reject_unknown(a, "sweep[]", {"name", "target", "component", "param", "values"});
    SweepAxis axis;
    axis.line = line_of(a);
    if (!a["target"] || !a["param"] || !a["values"]) {
      fail("every sweep axis needs 'target', 'param' and 'values'", a);
    }
    const std::string target = as_string(a["target"], "sweep.target");
    if (target == "coefficient") {
      axis.target = SweepAxis::Target::coefficient;
    } else if (target == "nonlinearity") {
      axis.target = SweepAxis::Target::nonlinearity;
    } else {
      fail("'sweep.target' must be 'coefficient' or 'nonlinearity', got '" + target + "'", a["target"]);
    }
    if (a["component"] && !a["component"].IsNull()) {
      const std::size_t c = as_count(a["component"], "sweep.component");
      if (c == 0 || c > cfg.components.size()) {
        fail("'sweep.component' must lie in 1.." + std::to_string(cfg.components.size()), a["component"]);
      }
      axis.component = c;
    }
    axis.param = as_count(a["param"], "sweep.param");
    axis.values = as_double_list(a["values"], "sweep.values");
    for (double v : axis.values) {
      if (!std::isfinite(v)) fail("sweep values must be finite", a["values"]);
    }
    std::sort(axis.values.begin(), axis.values.end());
    axis.values.erase(std::unique(axis.values.begin(), axis.values.end()), axis.values.end());
    axis.name = a["name"] ? as_string(a["name"], "sweep.name")
                          : target + std::to_string(axis.component.value_or(0)) + "_p" + std::to_string(axis.param);
    if (!names.insert(axis.name).second) fail("duplicate sweep axis name '" + axis.name + "'", a);
    // Every touched family must have the parameter.
    for (std::size_t i = 0; i < cfg.components.size(); ++i) {
      if (axis.component && *axis.component != i + 1) continue;
      const FamilyRef& ref = axis.target == SweepAxis::Target::coefficient ? cfg.components[i].coefficient
                                                                           : cfg.components[i].nonlinearity;
      if (axis.param >= ref.params.size()) {
        fail("'sweep.param' = " + std::to_string(axis.param) + " is out of range for family '" + ref.name +
                 "' with " + std::to_string(ref.params.size()) + " parameters",
             a["param"]);
      }
    }
    cfg.sweep.push_back(std::move(axis));
  }
}

Mode parse_mode(const YAML::Node& node) {
  const std::string m = as_string(node, "mode");
  for (Mode mode : {Mode::check, Mode::solve, Mode::classify, Mode::sweep, Mode::oracle}) {
    if (m == to_string(mode)) return mode;
  }
  fail("'mode' must be one of check, solve, classify, sweep, oracle; got '" + m + "'", node);
}

std::string family_yaml(const FamilyRef& ref) {
  std::string s = "{family: " + ref.name + ", params: [";
  for (std::size_t i = 0; i < ref.params.size(); ++i) s += (i ? ", " : "") + format_double(ref.params[i]);
  return s + "]}";
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::check: return "check";
    case Mode::solve: return "solve";
    case Mode::classify: return "classify";
    case Mode::sweep: return "sweep";
    case Mode::oracle: return "oracle";
  }
  return "unknown";
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("malformed YAML: " + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  if (!root.IsMap()) throw ConfigError("the config must be a YAML mapping", root.IsNull() ? 0 : line_of(root));
  try {
    reject_unknown(root, "the top level", {"mode", "problem", "grid", "solver", "oracle", "outputs", "sweep"});
    RunConfig cfg;
    if (root["mode"]) cfg.mode = parse_mode(root["mode"]);
    if (!root["problem"]) throw ConfigError("missing 'problem' section", 0);
    parse_problem(root["problem"], cfg);
    if (root["grid"]) parse_grid(root["grid"], cfg);
    if (root["solver"]) parse_solver(root["solver"], cfg);
    if (root["oracle"]) {
      require_map(root["oracle"], "oracle");
      reject_unknown(root["oracle"], "oracle", {"threshold"});
      if (root["oracle"]["threshold"]) cfg.oracle.threshold = as_double(root["oracle"]["threshold"], "oracle.threshold");
    }
    if (root["outputs"]) parse_outputs(root["outputs"], cfg);
    if (root["sweep"]) parse_sweep(root["sweep"], cfg);
    cfg.validate();
    cfg.problem();
    return cfg;
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", 0);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void RunConfig::validate() const {
  if (dimension < 3) throw ConfigError("'problem.dimension' must be >= 3", components_line);
  if (!(epsilon > 0.0)) throw ConfigError("'problem.epsilon' must be > 0", components_line);
  if (!(grid.r_max > 0.0) || !std::isfinite(grid.r_max)) throw ConfigError("'grid.r_max' must be > 0", 0);
  if (grid.n_nodes < RadialGrid::kMinNodes) throw ConfigError("'grid.n_nodes' must be >= 16", 0);
  if (solver.tol < 0.0 || !std::isfinite(solver.tol)) throw ConfigError("'solver.tol' must be >= 0", 0);
  if (solver.max_iter == 0) throw ConfigError("'solver.max_iter' must be >= 1", 0);
  if (!(solver.blow_up_ceiling > 0.0)) throw ConfigError("'solver.blow_up_ceiling' must be > 0", 0);
  if (solver.base_override && !(*solver.base_override > 0.0)) {
    throw ConfigError("'solver.base_override' must be > 0", 0);
  }
  if (!(solver.blow_up_ceiling > resolved_base())) {
    throw ConfigError("'solver.blow_up_ceiling' must exceed the base", 0);
  }
  if (!(oracle.threshold > 0.0)) throw ConfigError("'oracle.threshold' must be > 0", 0);
}

ProblemSpec RunConfig::problem() const { return problem(components); }

ProblemSpec RunConfig::problem(const std::vector<ComponentConfig>& comps) const {
  std::vector<CoefficientFamily> coeffs;
  std::vector<NonlinearityFamily> nonlins;
  for (const ComponentConfig& c : comps) {
    try {
      coeffs.push_back(CoefficientFamily::from_name(c.coefficient.name, c.coefficient.params));
    } catch (const PreconditionError& e) {
      throw ConfigError(std::string("coefficient: ") + e.what(), c.coefficient.line);
    }
    try {
      nonlins.push_back(NonlinearityFamily::from_name(c.nonlinearity.name, c.nonlinearity.params));
    } catch (const PreconditionError& e) {
      throw ConfigError(std::string("nonlinearity: ") + e.what(), c.nonlinearity.line);
    }
  }
  try {
    return ProblemSpec(dimension, std::move(coeffs), std::move(nonlins), epsilon);
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("problem: ") + e.what(), components_line);
  }
}

GridPtr RunConfig::make_grid() const {
  return std::make_shared<const RadialGrid>(RadialGrid::make(grid.r_max, grid.n_nodes, grid.spacing));
}

double RunConfig::resolved_base() const {
  return solver.base_override.value_or(1.0 / static_cast<double>(std::max<std::size_t>(components.size(), 1)));
}

SolveOptions RunConfig::solve_options() const {
  SolveOptions opts;
  opts.tol = solver.tol;
  opts.max_iter = solver.max_iter;
  opts.blow_up_ceiling = solver.blow_up_ceiling;
  opts.base_override = solver.base_override;
  return opts;
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "mode: " << to_string(cfg.mode) << '\n';
  os << "problem:\n";
  os << "  dimension: " << cfg.dimension << '\n';
  os << "  d: " << cfg.components.size() << '\n';
  os << "  epsilon: " << format_double(cfg.epsilon) << '\n';
  os << "  components:\n";
  for (const ComponentConfig& c : cfg.components) {
    os << "    - coefficient: " << family_yaml(c.coefficient) << '\n';
    os << "      nonlinearity: " << family_yaml(c.nonlinearity) << '\n';
  }
  os << "grid:\n";
  os << "  r_max: " << format_double(cfg.grid.r_max) << '\n';
  os << "  n_nodes: " << cfg.grid.n_nodes << '\n';
  os << "  spacing: " << (cfg.grid.spacing == Spacing::uniform ? "uniform" : "graded") << '\n';
  const double base = cfg.resolved_base();
  os << "solver:\n";
  os << "  tol: " << format_double(resolved_tolerance(cfg.solve_options(), base)) << '\n';
  os << "  max_iter: " << cfg.solver.max_iter << '\n';
  os << "  blow_up_ceiling: " << format_double(cfg.solver.blow_up_ceiling) << '\n';
  os << "  base_override: " << (cfg.solver.base_override ? format_double(*cfg.solver.base_override) : "null")
     << "  # resolved base " << format_double(base) << '\n';
  os << "oracle:\n";
  os << "  threshold: " << format_double(cfg.oracle.threshold) << '\n';
  os << "outputs:\n";
  os << "  solution_csv: " << cfg.outputs.solution_csv << '\n';
  os << "  report: " << cfg.outputs.report << '\n';
  os << "  sweep_csv: " << cfg.outputs.sweep_csv << '\n';
  os << "  oracle_csv: " << cfg.outputs.oracle_csv << '\n';
  os << "sweep:";
  if (cfg.sweep.empty()) os << " []";
  os << '\n';
  for (const SweepAxis& a : cfg.sweep) {
    os << "  - name: " << a.name << '\n';
    os << "    target: " << (a.target == SweepAxis::Target::coefficient ? "coefficient" : "nonlinearity") << '\n';
    os << "    component: " << (a.component ? std::to_string(*a.component) : "null  # every component") << '\n';
    os << "    param: " << a.param << '\n';
    os << "    values: [";
    for (std::size_t i = 0; i < a.values.size(); ++i) os << (i ? ", " : "") << format_double(a.values[i]);
    os << "]\n";
  }
  return os.str();
}

}  // namespace elliptic
