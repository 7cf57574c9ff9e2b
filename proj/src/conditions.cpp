#include "elliptic/conditions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "elliptic/detail/gauss.hpp"
#include "elliptic/errors.hpp"
#include "elliptic/format.hpp"
#include "elliptic/radial.hpp"

namespace elliptic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Convergence from_slope(double slope) {
  if (slope >= kExtrapolationThreshold) return Convergence::diverges;
  if (slope <= -kExtrapolationThreshold) return Convergence::converges;
  return Convergence::inconclusive;
}

// Log-log slope of the growth metric between two Lambda values.
double metric_slope(double m_lo, double m_hi, double lambda_lo, double lambda_hi) {
  if (std::isinf(m_hi)) return kInf;
  if (m_hi == 0.0) return -kInf;
  if (m_lo == 0.0) return kInf;
  return (std::log(m_hi) - std::log(m_lo)) / (std::log(lambda_hi) - std::log(lambda_lo));
}

// Integrand exponent of t^w * (tail), w the polynomial weight.
double moment_exponent(const TailExponent& tail, double weight) {
  switch (tail.kind) {
    case TailExponent::Kind::zero:
    case TailExponent::Kind::super_polynomial: return -kInf;
    case TailExponent::Kind::polynomial: return weight - tail.decay;
  }
  return -kInf;
}

ImproperIntegralVerdict moment_verdict(const ProblemSpec& spec, Profile which, double weight,
                                       CheckOptions opts) {
  if (!opts.force_numeric) {
    ImproperIntegralVerdict v = closed_form_verdict(moment_exponent(spec.coefficient_sum_tail(which), weight));
    return v;
  }
  return numeric_extrapolation(
      [&spec, which, weight](double t) { return std::pow(t, weight) * spec.coefficient_sum(which, t); },
      0.0);
}

std::string fmt_num(double x) { return format_double(x); }

}  // namespace

std::string_view to_string(Convergence c) {
  switch (c) {
    case Convergence::converges: return "converges";
    case Convergence::diverges: return "diverges";
    case Convergence::inconclusive: return "inconclusive";
    case Convergence::not_applicable: return "not_applicable";
  }
  return "unknown";
}

std::string_view to_string(VerdictMethod m) {
  switch (m) {
    case VerdictMethod::closed_form_exponent: return "closed_form_exponent";
    case VerdictMethod::numeric_extrapolation: return "numeric_extrapolation";
    case VerdictMethod::none: return "none";
  }
  return "unknown";
}

std::string ImproperIntegralVerdict::describe() const {
  std::ostringstream os;
  os << to_string(status) << " (" << to_string(method);
  if (method == VerdictMethod::closed_form_exponent) {
    os << ", tail exponent " << fmt_num(tail_exponent);
  } else if (method == VerdictMethod::numeric_extrapolation) {
    os << ", slope " << fmt_num(slope) << ", partials";
    for (double p : partial_integrals) os << ' ' << fmt_num(p);
  }
  os << ')';
  if (!note.empty()) os << ' ' << note;
  return os.str();
}

ImproperIntegralVerdict closed_form_verdict(double integrand_exponent) {
  ImproperIntegralVerdict v;
  v.method = VerdictMethod::closed_form_exponent;
  v.tail_exponent = integrand_exponent;
  v.status = integrand_exponent >= -1.0 ? Convergence::diverges : Convergence::converges;
  return v;
}

ImproperIntegralVerdict not_applicable_verdict(std::string note) {
  ImproperIntegralVerdict v;
  v.status = Convergence::not_applicable;
  v.method = VerdictMethod::none;
  v.note = std::move(note);
  return v;
}

ImproperIntegralVerdict numeric_extrapolation(const std::function<double(double)>& integrand,
                                              double lower) {
  if (!(lower >= 0.0) || lower >= kLambdas[0]) {
    throw PreconditionError("numeric extrapolation needs a lower limit in [0, 10)");
  }
  ImproperIntegralVerdict v;
  v.method = VerdictMethod::numeric_extrapolation;
  double partial = 0.0;
  double start = lower;
  if (start < 1.0) {
    partial += detail::gauss_uniform(integrand, start, 1.0, 16);
    start = 1.0;
  }
  for (double lambda : kLambdas) {
    partial += detail::gauss_geometric(integrand, start, lambda, 64);
    start = lambda;
    v.lambdas.push_back(lambda);
    v.partial_integrals.push_back(partial);
    v.growth_metric.push_back(lambda * integrand(lambda));
  }
  const std::size_t n = v.growth_metric.size();
  v.slope = metric_slope(v.growth_metric[n - 3], v.growth_metric[n - 1], v.lambdas[n - 3],
                         v.lambdas[n - 1]);
  v.status = std::isnan(v.slope) ? Convergence::inconclusive : from_slope(v.slope);
  return v;
}

// ---------------------------------------------------------------------------
// Individual criteria

ImproperIntegralVerdict check_keller_osserman(const BigF& f, CheckOptions opts) {
  if (f.is_zero()) {
    ImproperIntegralVerdict v = closed_form_verdict(kInf);
    v.note = "F vanishes identically";
    return v;
  }
  const auto growth = f.growth_exponent();
  if (growth && !opts.force_numeric) {
    // F(s) ~ s^{g+1}, so F^{-1/2} ~ s^{-(g+1)/2}.
    return closed_form_verdict(-0.5 * (*growth + 1.0));
  }
  return numeric_extrapolation([&f](double s) { return 1.0 / std::sqrt(f(s)); }, 1.0);
}

ImproperIntegralVerdict check_phi_moment(const ProblemSpec& spec, double eps, CheckOptions opts) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be > 0");
  return moment_verdict(spec, Profile::sphere_max, 1.0 + eps, opts);
}

ImproperIntegralVerdict check_psi_moment(const ProblemSpec& spec, CheckOptions opts) {
  return moment_verdict(spec, Profile::sphere_min, 1.0, opts);
}

ImproperIntegralVerdict check_p_moment(const ProblemSpec& spec, double eps, CheckOptions opts) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be > 0");
  if (!spec.is_radial()) return not_applicable_verdict("coefficients are not radial");
  return moment_verdict(spec, Profile::radial, 1.0 + eps, opts);
}

std::vector<ImproperIntegralVerdict> check_green_divergence(const ProblemSpec& spec,
                                                            CheckOptions opts) {
  std::vector<ImproperIntegralVerdict> out;
  const std::size_t d = spec.components();
  if (!spec.is_radial()) {
    for (std::size_t j = 0; j < d; ++j) out.push_back(not_applicable_verdict("coefficients are not radial"));
    return out;
  }
  const double n = static_cast<double>(spec.dimension());
  if (!opts.force_numeric) {
    for (std::size_t j = 0; j < d; ++j) {
      // Inner integral ~ t^{N - sigma} (sigma < N), log t (sigma = N) or
      // bounded (sigma > N); times t^{1-N}.
      const TailExponent tail = spec.coefficient(j).tail(Profile::radial);
      const double exponent = tail.kind == TailExponent::Kind::polynomial
                                  ? 1.0 - std::min(tail.decay, n)
                                  : -kInf;
      out.push_back(closed_form_verdict(exponent));
    }
    return out;
  }
  // Partial values come straight from the Green operator on a graded grid.
  auto grid = std::make_shared<const RadialGrid>(RadialGrid::graded(kLambdas[3], 2000, 1.005));
  const GreenOperator green(grid, spec.dimension());
  for (std::size_t j = 0; j < d; ++j) {
    const CoefficientFamily& p = spec.coefficient(j);
    const RadialFunction g = RadialFunction::sample(grid, [&p](double r) { return p.radial(r); });
    const RadialFunction inner = green.cumulative_inner(g);
    const RadialFunction outer = green.apply(g);
    ImproperIntegralVerdict v;
    v.method = VerdictMethod::numeric_extrapolation;
    for (double lambda : kLambdas) {
      v.lambdas.push_back(lambda);
      v.partial_integrals.push_back(outer.at_radius(lambda));
      // Lambda * Lambda^{1-N} I(Lambda)
      v.growth_metric.push_back(std::pow(lambda, 2.0 - n) * inner.at_radius(lambda));
    }
    v.slope = metric_slope(v.growth_metric[1], v.growth_metric[3], v.lambdas[1], v.lambdas[3]);
    v.status = std::isnan(v.slope) ? Convergence::inconclusive : from_slope(v.slope);
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monotonicity of r^{2N-2} sum_j profile_j(r)

std::string_view to_string(MonotonicityResult::Status s) {
  switch (s) {
    case MonotonicityResult::Status::holds: return "holds";
    case MonotonicityResult::Status::fails: return "fails";
    case MonotonicityResult::Status::not_applicable: return "not_applicable";
  }
  return "unknown";
}

MonotonicityResult check_monotonicity(const ProblemSpec& spec, Profile which) {
  MonotonicityResult out;
  if (which == Profile::radial && !spec.is_radial()) {
    out.status = MonotonicityResult::Status::not_applicable;
    out.evidence = "coefficients are not radial";
    return out;
  }
  const double power = 2.0 * spec.dimension() - 2.0;
  const TailExponent tail = spec.coefficient_sum_tail(which);
  std::ostringstream os;
  switch (tail.kind) {
    case TailExponent::Kind::zero:
      out.status = MonotonicityResult::Status::holds;
      out.holds_from_R = 0.0;
      out.evidence = "coefficient sum vanishes identically";
      return out;
    case TailExponent::Kind::super_polynomial:
      out.status = MonotonicityResult::Status::fails;
      out.evidence = "super-polynomial decay beats r^{2N-2}";
      return out;
    case TailExponent::Kind::polynomial:
      if (tail.decay > power) {
        os << "tail exponent " << fmt_num(power - tail.decay) << " < 0";
        out.status = MonotonicityResult::Status::fails;
        out.evidence = os.str();
        return out;
      }
      break;
  }

  // Sampled verification on 0 and a geometric ladder 1e-3 .. 1e4.
  constexpr int kSamples = 2000;
  std::vector<double> radii{0.0};
  for (int i = 0; i < kSamples; ++i) {
    radii.push_back(1e-3 * std::pow(1e7, static_cast<double>(i) / (kSamples - 1)));
  }
  std::vector<double> h(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    h[i] = std::pow(radii[i], power) * spec.coefficient_sum(which, radii[i]);
  }
  std::size_t last_violation = radii.size();
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    const double scale = std::max({std::abs(h[i]), std::abs(h[i + 1]), 1e-300});
    if ((h[i + 1] - h[i]) / scale < -1e-12) last_violation = i;
  }
  os << "tail exponent " << fmt_num(power - tail.decay) << " >= 0; " << radii.size()
     << " samples on [0, 1e4]";
  if (last_violation == radii.size()) {
    out.status = MonotonicityResult::Status::holds;
    out.holds_from_R = 0.0;
  } else if (last_violation + 2 >= radii.size()) {
    out.status = MonotonicityResult::Status::fails;
    os << "; still decreasing at r = 1e4";
  } else {
    out.status = MonotonicityResult::Status::holds;
    out.holds_from_R = radii[last_violation + 1];
  }
  out.evidence = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// Classification

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::BoundedExists: return "BoundedExists";
    case Verdict::NoBoundedRadial: return "NoBoundedRadial";
    case Verdict::AllRadialSolutionsLarge: return "AllRadialSolutionsLarge";
    case Verdict::LargeExistenceNecessaryHolds: return "LargeExistenceNecessaryHolds";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

bool Classification::reports(Verdict v) const {
  return std::find(applicable.begin(), applicable.end(), v) != applicable.end();
}

bool ConditionReport::phi_moment_converges_for_some_eps() const {
  if (phi_moment.status == Convergence::converges) return true;
  return std::any_of(phi_moment_sweep.begin(), phi_moment_sweep.end(), [](const auto& entry) {
    return entry.second.status == Convergence::converges;
  });
}

bool ConditionReport::hypotheses_pass() const {
  return audit_passes(audit) && keller_osserman.status == Convergence::diverges;
}

Classification classify(const ConditionReport& report) {
  Classification out;
  auto add = [&out](Verdict v, std::string clause) {
    out.applicable.push_back(v);
    out.clauses.push_back(std::move(clause));
  };

  if (report.phi_moment_converges_for_some_eps() && report.monotonicity_phi.holds() &&
      report.hypotheses_pass()) {
    add(Verdict::BoundedExists,
        "bounded existence: int t^{1+eps} sum phi_j < inf, r^{2N-2} sum phi_j eventually "
        "nondecreasing, hypotheses on f hold");
  }
  if (report.psi_moment.status == Convergence::diverges && report.monotonicity_psi.holds()) {
    add(Verdict::NoBoundedRadial,
        "radial nonexistence: int t sum psi_j = inf, r^{2N-2} sum psi_j eventually nondecreasing");
  }
  const auto& gd = report.green_divergence;
  const bool all_diverge = !gd.empty() && std::all_of(gd.begin(), gd.end(), [](const auto& v) {
    return v.status == Convergence::diverges;
  });
  const bool some_diverge = std::any_of(gd.begin(), gd.end(), [](const auto& v) {
    return v.status == Convergence::diverges;
  });
  if (report.radial && all_diverge) {
    add(Verdict::AllRadialSolutionsLarge,
        "largeness: int t^{1-N} int s^{N-1} p_j = inf for every j");
  } else if (report.radial && some_diverge) {
    out.notes.push_back("Green-operator divergence holds for some but not all components");
  }
  if (report.radial && report.p_moment.status == Convergence::diverges) {
    add(Verdict::LargeExistenceNecessaryHolds,
        "necessary condition for large solutions: int r^{1+eps} sum p_j = inf (bookkeeping only)");
  }

  if (out.applicable.empty()) {
    out.verdict = Verdict::Inconclusive;
    out.clause = "no clause applies";
  } else {
    out.verdict = out.applicable.front();
    out.clause = out.clauses.front();
  }
  if (out.reports(Verdict::BoundedExists) && out.reports(Verdict::NoBoundedRadial)) {
    out.notes.push_back(
        "no bounded radial solution exists for the psi-minorized radial problem; the bounded "
        "solution, if any, is non-radial");
  }
  if (!report.radial) {
    out.notes.push_back("non-radial coefficients: largeness clauses not applicable");
  }
  return out;
}

ConditionReport evaluate_conditions(const ProblemSpec& spec, CheckOptions opts) {
  ConditionReport r;
  r.radial = spec.is_radial();
  r.epsilon = spec.epsilon();
  r.audit = hypothesis_audit(spec);
  r.keller_osserman = check_keller_osserman(BigF(spec), opts);
  r.phi_moment = check_phi_moment(spec, spec.epsilon(), opts);

  std::vector<double> eps(std::begin(kEpsilonSweep), std::end(kEpsilonSweep));
  eps.push_back(spec.epsilon());
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  for (double e : eps) r.phi_moment_sweep.emplace_back(e, check_phi_moment(spec, e, opts));

  r.psi_moment = check_psi_moment(spec, opts);
  r.green_divergence = check_green_divergence(spec, opts);
  r.p_moment_epsilon = eps.front();
  r.p_moment = check_p_moment(spec, r.p_moment_epsilon, opts);
  if (r.p_moment.status != Convergence::not_applicable) {
    r.p_moment.note = "smallest swept epsilon is the binding case";
  }
  r.monotonicity_phi = check_monotonicity(spec, Profile::sphere_max);
  r.monotonicity_psi = check_monotonicity(spec, Profile::sphere_min);
  r.monotonicity_p = check_monotonicity(spec, Profile::radial);
  r.classification = classify(r);
  return r;
}

namespace {

std::string monotonicity_text(const MonotonicityResult& m) {
  std::string s(to_string(m.status));
  if (m.holds()) s += " from R = " + fmt_num(m.holds_from_R);
  return s;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> to_key_values(const ConditionReport& r) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("radial", r.radial ? "true" : "false");
  kv.emplace_back("epsilon", fmt_num(r.epsilon));
  for (const HypothesisCheck& c : r.audit) {
    kv.emplace_back("audit." + c.id, std::string(to_string(c.verdict)));
    kv.emplace_back("audit." + c.id + ".evidence", c.evidence);
  }
  kv.emplace_back("keller_osserman", r.keller_osserman.describe());
  kv.emplace_back("phi_moment", r.phi_moment.describe());
  for (const auto& [e, v] : r.phi_moment_sweep) {
    kv.emplace_back("phi_moment.eps=" + fmt_num(e), v.describe());
  }
  kv.emplace_back("psi_moment", r.psi_moment.describe());
  for (std::size_t j = 0; j < r.green_divergence.size(); ++j) {
    kv.emplace_back("green_divergence." + std::to_string(j + 1), r.green_divergence[j].describe());
  }
  kv.emplace_back("p_moment.eps=" + fmt_num(r.p_moment_epsilon), r.p_moment.describe());
  kv.emplace_back("monotonicity_phi", monotonicity_text(r.monotonicity_phi));
  kv.emplace_back("monotonicity_phi.evidence", r.monotonicity_phi.evidence);
  kv.emplace_back("monotonicity_psi", monotonicity_text(r.monotonicity_psi));
  kv.emplace_back("monotonicity_psi.evidence", r.monotonicity_psi.evidence);
  kv.emplace_back("monotonicity_p", monotonicity_text(r.monotonicity_p));
  kv.emplace_back("monotonicity_p.evidence", r.monotonicity_p.evidence);
  kv.emplace_back("verdict", std::string(to_string(r.classification.verdict)));
  kv.emplace_back("clause", r.classification.clause);
  std::string applicable;
  for (Verdict v : r.classification.applicable) {
    if (!applicable.empty()) applicable += ' ';
    applicable += to_string(v);
  }
  kv.emplace_back("applicable", applicable.empty() ? "none" : applicable);
  for (std::size_t i = 0; i < r.classification.notes.size(); ++i) {
    kv.emplace_back("note." + std::to_string(i + 1), r.classification.notes[i]);
  }
  return kv;
}

std::vector<std::string> to_csv_rows(const ConditionReport& r) {
  std::vector<std::string> rows{"condition,status,method,detail"};
  auto row = [&rows](const std::string& name, const ImproperIntegralVerdict& v) {
    std::string detail = v.method == VerdictMethod::closed_form_exponent ? fmt_num(v.tail_exponent)
                         : v.method == VerdictMethod::numeric_extrapolation ? fmt_num(v.slope)
                                                                            : "";
    rows.push_back(name + ',' + std::string(to_string(v.status)) + ',' +
                   std::string(to_string(v.method)) + ',' + detail);
  };
  row("keller_osserman", r.keller_osserman);
  for (const auto& [e, v] : r.phi_moment_sweep) row("phi_moment[eps=" + fmt_num(e) + "]", v);
  row("psi_moment", r.psi_moment);
  for (std::size_t j = 0; j < r.green_divergence.size(); ++j) {
    row("green_divergence[" + std::to_string(j + 1) + "]", r.green_divergence[j]);
  }
  row("p_moment[eps=" + fmt_num(r.p_moment_epsilon) + "]", r.p_moment);
  auto mono = [&rows](const std::string& name, const MonotonicityResult& m) {
    rows.push_back(name + ',' + std::string(to_string(m.status)) + ",sampled," +
                   (m.holds() ? fmt_num(m.holds_from_R) : ""));
  };
  mono("monotonicity_phi", r.monotonicity_phi);
  mono("monotonicity_psi", r.monotonicity_psi);
  mono("monotonicity_p", r.monotonicity_p);
  rows.push_back("classification," + std::string(to_string(r.classification.verdict)) + ",decision_table,");
  return rows;
}

// ---------------------------------------------------------------------------
// Implication checks between the growth conditions on f

std::string_view to_string(ImplicationVerdict v) {
  switch (v) {
    case ImplicationVerdict::consistent: return "consistent";
    case ImplicationVerdict::vacuous: return "vacuous";
    case ImplicationVerdict::violated: return "violated";
    case ImplicationVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

ImplicationVerdict implication(Convergence hypothesis, bool side_conditions,
                               std::span<const ImproperIntegralVerdict> conclusions) {
  if (!side_conditions || hypothesis == Convergence::converges) return ImplicationVerdict::vacuous;
  if (hypothesis != Convergence::diverges) return ImplicationVerdict::inconclusive;
  bool inconclusive = false;
  for (const auto& c : conclusions) {
    if (c.status == Convergence::converges) return ImplicationVerdict::violated;
    if (c.status != Convergence::diverges) inconclusive = true;
  }
  return inconclusive ? ImplicationVerdict::inconclusive : ImplicationVerdict::consistent;
}

// int_1^inf (int_0^t g(s) ds)^{-1/2} dt for a single diagonal g.
ImproperIntegralVerdict componentwise_divergence(const NonlinearityFamily& f, std::size_t d,
                                                 CheckOptions opts) {
  const auto growth = f.growth_exponent();
  if (growth && !opts.force_numeric) return closed_form_verdict(-0.5 * (*growth + 1.0));
  auto antiderivative = [&f, d](double t) {
    if (auto exact = f.diagonal_integral(t, d)) return *exact;
    return romberg([&f, d](double s) { return f.diagonal(s, d); }, 0.0, t);
  };
  return numeric_extrapolation([antiderivative](double t) { return 1.0 / std::sqrt(antiderivative(t)); },
                               1.0);
}

}  // namespace

GrowthImplications check_growth_implications(const BigF& f, CheckOptions opts) {
  const std::size_t d = f.components();
  // The audit on f alone: pair the nonlinearities with unit coefficients.
  std::vector<CoefficientFamily> unit(d, CoefficientFamily::constant(1.0));
  const ProblemSpec probe(3, unit, f.underlying());
  const std::vector<HypothesisCheck> audit = hypothesis_audit(probe);
  const bool c1_c2 = audit_passes(audit);
  const ImproperIntegralVerdict ko = check_keller_osserman(f, opts);

  GrowthImplications out;
  out.componentwise.hypothesis = ko;
  for (const NonlinearityFamily& fi : f.underlying()) {
    out.componentwise.conclusions.push_back(componentwise_divergence(fi, d, opts));
  }
  out.componentwise.verdict = implication(ko.status, c1_c2, out.componentwise.conclusions);
  if (!c1_c2) out.componentwise.note = "hypotheses on f do not all pass";

  ImproperIntegralVerdict reciprocal;
  if (f.is_zero()) {
    reciprocal = closed_form_verdict(kInf);
  } else if (const auto g = f.growth_exponent(); g && !opts.force_numeric) {
    reciprocal = closed_form_verdict(-*g);
  } else {
    reciprocal = numeric_extrapolation([&f](double s) { return 1.0 / f.diagonal_sum(s); }, 1.0);
  }
  out.reciprocal_growth.hypothesis = reciprocal;
  out.reciprocal_growth.conclusions.push_back(ko);
  out.reciprocal_growth.verdict = implication(reciprocal.status, c1_c2, out.reciprocal_growth.conclusions);
  if (!c1_c2) out.reciprocal_growth.note = "hypotheses on f do not all pass";
  return out;
}

}  // namespace elliptic
