#include "elliptic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "elliptic/conditions.hpp"
#include "elliptic/detail/gauss.hpp"
#include "elliptic/errors.hpp"
#include "elliptic/format.hpp"

namespace elliptic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_grid_match(const RadialGrid& a, const RadialGrid& b, const char* what) {
  if (&a == &b) return;
  if (a.size() != b.size() || !std::equal(a.nodes().begin(), a.nodes().end(), b.nodes().begin())) {
    throw PreconditionError(std::string(what) + ": grids differ");
  }
}

// base + G[forcing_i] for every component, with derivative traces.
IterateField advance(const IterateField& prev, const Field& forcing, const GreenOperator& green,
                     double ceiling) {
  const GridPtr& grid = green.grid();
  const std::size_t n = grid->size();
  IterateField next;
  next.k = prev.k + 1;
  next.base = prev.base;
  next.derivatives.assign(forcing.size(), std::vector<double>(n));
  for (std::size_t i = 0; i < forcing.size(); ++i) {
    std::vector<double> values(n);
    green.apply_raw(forcing[i], values, next.derivatives[i]);
    bool finite = true;
    for (double& v : values) {
      v += prev.base;
      if (!std::isfinite(v)) {
        finite = false;
        next.blow_up = true;
      } else if (v > ceiling) {
        next.blow_up = true;
      }
    }
    next.components.emplace_back(grid, std::move(values), !finite);
  }
  return next;
}

double sup_delta(const IterateField& a, const IterateField& b) {
  double delta = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& u = a.components[i].values;
    const auto& v = b.components[i].values;
    for (std::size_t n = 0; n < u.size(); ++n) {
      const double diff = std::abs(v[n] - u[n]);
      if (!std::isfinite(diff)) return kInf;
      delta = std::max(delta, diff);
    }
  }
  return delta;
}

using ForcingFn = std::function<void(const IterateField&, Field&)>;
using IterateHook = std::function<void(const IterateField&)>;

SolveOutcome run_iteration(GridPtr grid, int dimension, std::size_t d, double base,
                           const ForcingFn& forcing, const SolveOptions& opts,
                           const IterateHook& hook = {}) {
  if (!(base > 0.0) || !std::isfinite(base)) throw PreconditionError("base must be finite and > 0");
  if (opts.max_iter == 0) throw PreconditionError("max_iter must be >= 1");
  if (!(opts.blow_up_ceiling > base)) throw PreconditionError("blow-up ceiling must exceed the base");
  const GreenOperator green(grid, dimension);

  SolveOutcome out;
  out.tol = resolved_tolerance(opts, base);
  IterateField current = IterateField::constant(grid, d, base);
  if (hook) hook(current);
  if (opts.keep_trace) out.trace.push_back(current);

  Field f;
  bool converged = false;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    forcing(current, f);
    IterateField next = advance(current, f, green, opts.blow_up_ceiling);
    out.violations += check_step(current, next);
    const double delta = sup_delta(current, next);
    out.sup_deltas.push_back(delta);
    out.iterations = it;
    if (hook) hook(next);
    if (opts.keep_trace) out.trace.push_back(next);
    if (next.blow_up) {
      out.status = SolveStatus::blow_up_detected;
      current = std::move(next);
      break;
    }
    converged = delta < out.tol * std::max(1.0, next.sup());
    current = std::move(next);
    if (converged) break;
  }
  if (converged) {
    out.status = SolveStatus::converged;
    forcing(current, f);
    const IterateField check = advance(current, f, green, kInf);
    out.residual = sup_delta(current, check);
  } else if (out.status != SolveStatus::blow_up_detected) {
    out.status = SolveStatus::max_iterations;
  }
  const std::vector<double> slope = current.sum_derivative();
  out.tail_slope = slope.back();
  out.fixed_point = std::move(current);
  return out;
}

ForcingFn component_forcing(const ProblemSpec& spec, Field coeffs, Kernel kernel) {
  for (const NonlinearityFamily& f : spec.nonlinearities()) {
    if (f.oracle_only()) {
      throw PreconditionError("nonlinearity '" + std::string(f.name()) + "' is accepted by the oracle only");
    }
  }
  return [&spec, coeffs = std::move(coeffs), kernel](const IterateField& w, Field& out) {
    Field values(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) values[i] = w.components[i].values;
    if (kernel == Kernel::parallel) {
      forcing_parallel(coeffs, spec.nonlinearities(), values, out);
    } else {
      forcing_serial(coeffs, spec.nonlinearities(), values, out);
    }
  };
}

double relative_slack(double lhs, double rhs) {
  if (rhs == lhs) return 0.0;
  return (rhs - lhs) / std::max(std::abs(rhs), std::numeric_limits<double>::min());
}

}  // namespace

// ---------------------------------------------------------------------------
// IterateField and step invariants

IterateField IterateField::constant(GridPtr grid, std::size_t d, double base) {
  IterateField out;
  out.base = base;
  const std::size_t n = grid->size();
  for (std::size_t i = 0; i < d; ++i) {
    out.components.emplace_back(grid, std::vector<double>(n, base));
  }
  out.derivatives.assign(d, std::vector<double>(n, 0.0));
  return out;
}

double IterateField::sum_at(std::size_t node) const {
  double acc = 0.0;
  for (const RadialFunction& c : components) acc += c.values[node];
  return acc;
}

std::vector<double> IterateField::sum() const {
  std::vector<double> out(components.front().size(), 0.0);
  for (const RadialFunction& c : components) {
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += c.values[n];
  }
  return out;
}

std::vector<double> IterateField::sum_derivative() const {
  std::vector<double> out(derivatives.front().size(), 0.0);
  for (const auto& d : derivatives) {
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += d[n];
  }
  return out;
}

double IterateField::sup() const {
  double s = 0.0;
  for (const RadialFunction& c : components) {
    for (double v : c.values) s = std::max(s, std::abs(v));
  }
  return s;
}

StepInvariants& StepInvariants::operator+=(const StepInvariants& other) {
  monotone_in_k += other.monotone_in_k;
  floor += other.floor;
  monotone_in_r += other.monotone_in_r;
  steps += other.steps;
  return *this;
}

StepInvariants check_step(const IterateField& prev, const IterateField& next) {
  if (prev.size() != next.size()) throw DataError("check_step: component counts differ");
  StepInvariants out;
  out.steps = 1;
  for (std::size_t i = 0; i < next.size(); ++i) {
    const auto& u = prev.components[i].values;
    const auto& v = next.components[i].values;
    for (std::size_t n = 0; n < v.size(); ++n) {
      if (v[n] < u[n] - kMonotoneSlack) ++out.monotone_in_k;
      if (v[n] < next.base) ++out.floor;
      if (n > 0 && v[n] < v[n - 1]) ++out.monotone_in_r;
    }
  }
  return out;
}

Field sample_coefficients(const ProblemSpec& spec, const RadialGrid& grid, Profile which) {
  if (which == Profile::radial && !spec.is_radial()) {
    throw PreconditionError("radial coefficient profile requested for non-radial data");
  }
  Field out(spec.components(), std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < spec.components(); ++i) {
    const CoefficientFamily& p = spec.coefficient(i);
    for (std::size_t n = 0; n < grid.size(); ++n) out[i][n] = p.profile(which, grid.node(n));
  }
  return out;
}

IterateField picard_step(const IterateField& prev, const Field& coeffs, const ProblemSpec& spec,
                         const GreenOperator& green, Kernel kernel) {
  if (prev.size() != spec.components()) throw PreconditionError("picard_step: component count mismatch");
  require_grid_match(*prev.grid(), *green.grid(), "picard_step");
  Field f;
  component_forcing(spec, coeffs, kernel)(prev, f);
  return advance(prev, f, green, kInf);
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::blow_up_detected: return "blow_up_detected";
    case SolveStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

double resolved_tolerance(const SolveOptions& opts, double base) {
  return opts.tol > 0.0 ? opts.tol : 1e-10 * (1.0 + base);
}

double SolveOutcome::sum_at_rmax() const {
  return fixed_point.sum_at(fixed_point.grid()->size() - 1);
}

// ---------------------------------------------------------------------------
// Solves

SolveOutcome solve_lower(const ProblemSpec& spec, GridPtr grid, const SolveOptions& opts) {
  const std::size_t d = spec.components();
  const double base = opts.base_override.value_or(1.0 / static_cast<double>(d));
  Field coeffs = sample_coefficients(spec, *grid, Profile::sphere_max);
  return run_iteration(grid, spec.dimension(), d, base,
                       component_forcing(spec, std::move(coeffs), opts.kernel), opts);
}

double upper_base(const SolveOutcome& lower) { return lower.sum_at_rmax(); }

UpperSolve solve_upper(const ProblemSpec& spec, const SolveOutcome& lower, double M,
                       const SolveOptions& opts) {
  const double sup_lower = upper_base(lower);
  if (!(M >= sup_lower)) {
    throw PreconditionError("M = " + format_double(M) + " is below sup sum_i w_i = " +
                            format_double(sup_lower));
  }
  if (lower.fixed_point.size() != spec.components()) {
    throw PreconditionError("solve_upper: lower solve has a different component count");
  }
  const GridPtr& grid = lower.fixed_point.grid();
  Field coeffs = sample_coefficients(spec, *grid, Profile::sphere_min);
  SolveOptions upper_opts = opts;
  upper_opts.base_override.reset();

  UpperSolve out;
  out.M = M;
  out.lower_tail_slope = lower.tail_slope;
  out.outcome = run_iteration(grid, spec.dimension(), spec.components(), M,
                              component_forcing(spec, std::move(coeffs), opts.kernel), upper_opts);
  double margin = kInf;
  for (std::size_t i = 0; i < spec.components(); ++i) {
    const auto& v = out.outcome.fixed_point.components[i].values;
    const auto& w = lower.fixed_point.components[i].values;
    for (std::size_t n = 0; n < v.size(); ++n) margin = std::min(margin, v[n] - w[n]);
  }
  out.sandwich_margin = margin;
  return out;
}

SolveOutcome solve_majorant(const ProblemSpec& spec, GridPtr grid, double z0, const SolveOptions& opts) {
  if (!spec.is_radial()) throw PreconditionError("solve_majorant requires radial coefficients");
  if (!(z0 > 0.0)) throw PreconditionError("z0 must be > 0");
  for (const NonlinearityFamily& f : spec.nonlinearities()) {
    if (f.oracle_only()) throw PreconditionError("oracle-only nonlinearity in solve_majorant");
  }
  std::vector<double> coeff(grid->size(), 0.0);
  for (std::size_t n = 0; n < grid->size(); ++n) {
    coeff[n] = spec.coefficient_sum(Profile::radial, grid->node(n));
  }
  const std::size_t d = spec.components();
  const Kernel kernel = opts.kernel;
  ForcingFn forcing = [&spec, coeff = std::move(coeff), d, kernel](const IterateField& z, Field& out) {
    out.assign(1, std::vector<double>(coeff.size()));
    const auto& values = z.components.front().values;
    if (kernel == Kernel::parallel) {
      diagonal_forcing_parallel(coeff, spec.nonlinearities(), d, values, out.front());
    } else {
      diagonal_forcing_serial(coeff, spec.nonlinearities(), d, values, out.front());
    }
  };
  return run_iteration(grid, spec.dimension(), 1, z0, forcing, opts);
}

DominatedSolve solve_dominated(const ProblemSpec& spec, double beta1, const SolveOutcome& majorant,
                               const SolveOptions& opts) {
  if (!spec.is_radial()) throw PreconditionError("solve_dominated requires radial coefficients");
  if (majorant.fixed_point.size() != 1) throw PreconditionError("majorant must be scalar");
  const double z0 = majorant.fixed_point.base;
  if (!(beta1 > 0.0) || beta1 > z0) {
    throw PreconditionError("beta1 must satisfy 0 < beta1 <= z(0) = " + format_double(z0));
  }
  const GridPtr& grid = majorant.fixed_point.grid();
  const auto& z = majorant.fixed_point.components.front().values;
  const double slack_scale = 10.0 * majorant.tol;

  DominatedSolve out;
  DominationReport& report = out.domination;
  IterateHook hook = [&report, &z, slack_scale](const IterateField& u) {
    ++report.iterates_checked;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const auto& v = u.components[j].values;
      for (std::size_t n = 0; n < v.size(); ++n) {
        const double margin = z[n] + slack_scale * std::max(1.0, std::abs(z[n])) - v[n];
        report.worst_margin = std::min(report.worst_margin, margin);
        if (!(margin >= 0.0)) {
          ++report.violations;
          if (!report.first) report.first = DominationReport::Violation{u.k, j, n, -margin};
        }
      }
    }
  };
  SolveOptions inner = opts;
  inner.base_override.reset();
  Field coeffs = sample_coefficients(spec, *grid, Profile::radial);
  out.outcome = run_iteration(grid, spec.dimension(), spec.components(), beta1,
                              component_forcing(spec, std::move(coeffs), opts.kernel), inner, hook);
  return out;
}

// ---------------------------------------------------------------------------
// Largeness trend

std::string_view to_string(LargenessTrend t) {
  switch (t) {
    case LargenessTrend::large_trend: return "large_trend";
    case LargenessTrend::bounded_trend: return "bounded_trend";
    case LargenessTrend::inconclusive: return "inconclusive";
  }
  return "unknown";
}

LargenessReport detect_largeness(const SolveOutcome& outcome, const ProblemSpec& spec,
                                 const SolveOptions& opts) {
  LargenessReport report;
  report.radii.assign(std::begin(kLargenessRadii), std::end(kLargenessRadii));
  if (!spec.is_radial()) {
    report.note = "coefficients are not radial";
    return report;
  }
  const double r_last = report.radii.back();
  const SolveOutcome* used = &outcome;
  SolveOutcome extended;
  if (outcome.status != SolveStatus::blow_up_detected && outcome.fixed_point.grid()->r_max() < r_last) {
    const double h = std::min(outcome.fixed_point.grid()->max_spacing(), 0.05);
    const auto n = static_cast<std::size_t>(std::ceil(r_last / h)) + 1;
    SolveOptions resolve = opts;
    resolve.keep_trace = false;
    resolve.base_override = outcome.fixed_point.base;
    extended = solve_lower(spec, std::make_shared<const RadialGrid>(RadialGrid::uniform(r_last, n)), resolve);
    used = &extended;
    report.note = "re-solved on a uniform [0, 100] grid with " + std::to_string(n) + " nodes";
  }

  const IterateField& u = used->fixed_point;
  if (used->status == SolveStatus::blow_up_detected) {
    report.blow_up = true;
    report.sums.assign(report.radii.size(), std::numeric_limits<double>::quiet_NaN());
    report.trend = LargenessTrend::large_trend;
    if (!report.note.empty()) report.note += "; ";
    report.note += "iteration exceeded the blow-up ceiling";
    return report;
  }
  const std::vector<double> total = u.sum();
  const RadialGrid& grid = *u.grid();
  for (double r : report.radii) report.sums.push_back(grid.interpolate(total, r));
  const double s10 = report.sums[0], s30 = report.sums[1], s100 = report.sums[2];
  report.last_relative_increment = (s100 - s30) / s100;

  // Lower bound from monotonicity of u and f between R = 10 and r = 100.
  const std::size_t nR = grid.nearest_node(report.radii.front());
  const std::size_t nr = grid.nearest_node(r_last);
  const double R = grid.node(nR), r = grid.node(nr);
  const int N = spec.dimension();
  const GreenOperator green(u.grid(), N);
  std::vector<double> at_R(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) at_R[j] = u.components[j].values[nR];
  double bound = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const CoefficientFamily& p = spec.coefficient(i);
    const RadialFunction g = RadialFunction::sample(u.grid(), [&p](double t) { return p.radial(t); });
    const RadialFunction I = green.cumulative_inner(g);
    const RadialFunction G = green.apply(g);
    const double kernel = (std::pow(R, 2.0 - N) - std::pow(r, 2.0 - N)) / (N - 2.0);
    const double L = G.values[nr] - G.values[nR] - I.values[nR] * kernel;
    bound += at_R[i] + spec.nonlinearity(i)(at_R) * std::max(L, 0.0);
  }
  report.lower_bound = bound;
  report.lower_bound_holds = total[nr] >= bound * (1.0 - 1e-6);

  const auto gd = check_green_divergence(spec);
  const bool none_converge = std::none_of(gd.begin(), gd.end(), [](const ImproperIntegralVerdict& v) {
    return v.status == Convergence::converges;
  });
  if (report.last_relative_increment < kSaturationThreshold) {
    report.trend = LargenessTrend::bounded_trend;
  } else if (s10 < s30 && s30 < s100 && (s100 - s30) > (s30 - s10) && none_converge) {
    report.trend = LargenessTrend::large_trend;
  } else {
    report.trend = LargenessTrend::inconclusive;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Proof-bound audit

BoundCertificate audit_proof_bounds(const std::vector<IterateField>& trace, const ProblemSpec& spec,
                                    double R) {
  if (trace.empty()) throw PreconditionError("audit_proof_bounds: empty trace");
  const GridPtr& grid = trace.front().grid();
  if (!(R > 0.0) || R > grid->r_max()) throw PreconditionError("audit radius must lie in (0, R_max]");
  BoundCertificate cert;
  const std::size_t nR = grid->nearest_node(R);
  cert.R = grid->node(nR);
  if (!(cert.R > 0.0)) throw PreconditionError("audit radius rounds to the origin");

  const MonotonicityResult mono = check_monotonicity(spec, Profile::sphere_max);
  if (!mono.holds() || mono.holds_from_R > cert.R) {
    cert.status = BoundCertificate::Status::not_applicable;
    cert.note = "r^{2N-2} sum phi_j is not nondecreasing from R on: " + mono.evidence;
    return cert;
  }

  const int N = spec.dimension();
  const double eps = spec.epsilon();
  const Field phi = sample_coefficients(spec, *grid, Profile::sphere_max);
  double phi_R_sum = 0.0;
  for (const auto& row : phi) {
    const double m = *std::max_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(nR) + 1);
    phi_R_sum += m;
    cert.phi_R_max = std::max(cert.phi_R_max, m);
  }
  const BigF F(spec);
  const std::size_t last = grid->size() - 1;
  const double r_max = grid->node(last);
  const double outer_kernel = (std::pow(cert.R, 2.0 - N) - std::pow(r_max, 2.0 - N)) / (N - 2.0);
  const double moment_tail = detail::gauss_geometric(
      [&spec, eps](double t) { return std::pow(t, 1.0 + eps) * spec.coefficient_sum(Profile::sphere_max, t); },
      cert.R, r_max, 64);
  const double eps_term = 1.0 / (eps * std::pow(cert.R, eps));

  auto record = [&cert](double slack, double& worst) {
    worst = std::min(worst, slack);
    if (slack < -kAuditSlack) ++cert.violations;
  };

  double worst_integrated = kInf;
  for (const IterateField& w : trace) {
    if (w.blow_up) continue;
    ++cert.iterates_audited;
    const std::vector<double> S = w.sum();
    const std::vector<double> dS = w.sum_derivative();
    double lower_limit = 1.0;
    if (S[0] < 1.0) {
      lower_limit = S[0];
      cert.lower_limit_modified = true;
    }
    for (std::size_t n = 0; n <= nR; ++n) {
      const double lhs = dS[n] * dS[n];
      const double rhs = 2.0 * phi_R_sum * F.integral(lower_limit, S[n]);
      record(relative_slack(lhs, rhs), cert.slack_gradient);
    }

    const double flux_R = std::pow(cert.R, N - 1.0) * dS[nR];
    const double C = flux_R * flux_R;
    const double sqrt_C = std::abs(flux_R);
    for (std::size_t n = nR; n <= last; ++n) {
      const double r = grid->node(n);
      double phi_sum = 0.0;
      for (const auto& row : phi) phi_sum += row[n];
      const double rhs = sqrt_C * std::pow(r, 1.0 - N) + std::sqrt(2.0 * phi_sum * F(S[n]));
      record(relative_slack(dS[n], rhs), cert.slack_flux);
    }

    const double lhs = detail::gauss_geometric([&F](double t) { return 1.0 / std::sqrt(F(t)); },
                                               S[nR], S[last], 64);
    const double F_R = F(S[nR]);
    const double green_term = sqrt_C == 0.0 ? 0.0 : sqrt_C / std::sqrt(F_R) * outer_kernel;
    const double rhs = green_term + moment_tail + eps_term;
    const double slack = relative_slack(lhs, rhs);
    record(slack, cert.slack_integrated);
    if (slack < worst_integrated) {
      worst_integrated = slack;
      cert.C = C;
      cert.lhs_integrated = lhs;
      cert.rhs_integrated = rhs;
    }
  }
  cert.status = cert.violations == 0 ? BoundCertificate::Status::holds : BoundCertificate::Status::violated;
  std::ostringstream os;
  os << cert.iterates_audited << " iterates audited";
  if (cert.iterates_audited < trace.size()) os << "; " << trace.size() - cert.iterates_audited << " blow-up iterates skipped";
  if (cert.lower_limit_modified) os << "; gradient bound lower limit clamped to sum_i w_i(0) < 1";
  cert.note = os.str();
  return cert;
}

}  // namespace elliptic
