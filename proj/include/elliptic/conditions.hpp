#pragma once

// Convergence/divergence criteria for the improper integrals that decide
// whether bounded or large entire solutions exist, and the decision table
// that turns them into a classification.
//
// Two tiers:
//   1. closed_form_exponent: every built-in family has a known tail
//      t^{-decay} (or a super-polynomial / identically zero tail), so the
//      integrand's tail exponent decides the verdict exactly.
//   2. numeric_extrapolation: partial integrals at Lambda = 10, ..., 10^4 plus
//      the growth metric m(Lambda) = Lambda * integrand(Lambda). The log-log
//      slope of m over the last two decades decides: >= 0.1 diverges,
//      <= -0.1 converges, otherwise inconclusive. Logarithmic corrections land
//      in the inconclusive band on purpose.

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "elliptic/problem.hpp"

namespace elliptic {

enum class Convergence { converges, diverges, inconclusive, not_applicable };
enum class VerdictMethod { closed_form_exponent, numeric_extrapolation, none };

std::string_view to_string(Convergence c);
std::string_view to_string(VerdictMethod m);

struct ImproperIntegralVerdict {
  Convergence status = Convergence::not_applicable;
  VerdictMethod method = VerdictMethod::none;
  /// closed form: the integrand behaves like t^{tail_exponent} (-inf for
  /// super-polynomial or vanishing tails, +inf for an infinite integrand).
  double tail_exponent = std::numeric_limits<double>::quiet_NaN();
  /// numeric: Lambda values, partial integrals and growth metric at each.
  std::vector<double> lambdas;
  std::vector<double> partial_integrals;
  std::vector<double> growth_metric;
  double slope = std::numeric_limits<double>::quiet_NaN();
  std::string note;

  std::string describe() const;
};

/// Integrand exponent e: int^inf t^e dt diverges iff e >= -1.
ImproperIntegralVerdict closed_form_verdict(double integrand_exponent);
ImproperIntegralVerdict not_applicable_verdict(std::string note);

inline constexpr double kExtrapolationThreshold = 0.1;
inline constexpr double kLambdas[] = {1e1, 1e2, 1e3, 1e4};

/// Tier-2 protocol for int_{lower}^inf integrand(t) dt, lower in [0, 10).
ImproperIntegralVerdict numeric_extrapolation(const std::function<double(double)>& integrand,
                                              double lower);

struct CheckOptions {
  /// Skip the closed-form tier (used to cross-check the two tiers).
  bool force_numeric = false;
};

/// Keller-Osserman type divergence: int_1^inf F(s)^{-1/2} ds = inf.
ImproperIntegralVerdict check_keller_osserman(const BigF& f, CheckOptions opts = {});
/// int_0^inf t^{1+eps} sum_j phi_j(t) dt < inf
ImproperIntegralVerdict check_phi_moment(const ProblemSpec& spec, double eps, CheckOptions opts = {});
/// int_0^inf t sum_j psi_j(t) dt = inf
ImproperIntegralVerdict check_psi_moment(const ProblemSpec& spec, CheckOptions opts = {});
/// Per component: int_0^inf t^{1-N} int_0^t s^{N-1} p_j(s) ds dt = inf
std::vector<ImproperIntegralVerdict> check_green_divergence(const ProblemSpec& spec, CheckOptions opts = {});
/// int_0^inf r^{1+eps} sum_j p_j(r) dr = inf
ImproperIntegralVerdict check_p_moment(const ProblemSpec& spec, double eps, CheckOptions opts = {});

struct MonotonicityResult {
  enum class Status { holds, fails, not_applicable };
  Status status = Status::not_applicable;
  /// Smallest checked radius beyond which the sampled differences of
  /// r^{2N-2} sum_j profile_j(r) are all >= -1e-12 (relative).
  double holds_from_R = std::numeric_limits<double>::quiet_NaN();
  std::string evidence;

  bool holds() const noexcept { return status == Status::holds; }
};

std::string_view to_string(MonotonicityResult::Status s);

/// r^{2N-2} sum_j profile_j(r) nondecreasing for large r.
MonotonicityResult check_monotonicity(const ProblemSpec& spec, Profile which);

enum class Verdict {
  BoundedExists,
  NoBoundedRadial,
  AllRadialSolutionsLarge,
  LargeExistenceNecessaryHolds,
  Inconclusive
};

std::string_view to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::Inconclusive;
  std::string clause;
  /// Every applicable clause, in decision-table order.
  std::vector<Verdict> applicable;
  std::vector<std::string> clauses;
  std::vector<std::string> notes;

  bool reports(Verdict v) const;
};

/// Default epsilon sweep for the existence criterion; the problem's own epsilon
/// is always added.
inline constexpr double kEpsilonSweep[] = {0.1, 0.5, 1.0};

struct ConditionReport {
  bool radial = true;
  double epsilon = 0.5;
  std::vector<HypothesisCheck> audit;
  ImproperIntegralVerdict keller_osserman;
  ImproperIntegralVerdict phi_moment;  // at epsilon
  std::vector<std::pair<double, ImproperIntegralVerdict>> phi_moment_sweep;  // ascending eps
  ImproperIntegralVerdict psi_moment;
  std::vector<ImproperIntegralVerdict> green_divergence;  // one per component
  double p_moment_epsilon = 0.1;
  ImproperIntegralVerdict p_moment;  // at the smallest swept epsilon
  MonotonicityResult monotonicity_phi, monotonicity_psi, monotonicity_p;
  Classification classification;

  bool phi_moment_converges_for_some_eps() const;
  /// Audit passes and the Keller-Osserman integral diverges.
  bool hypotheses_pass() const;
};

/// Applies the decision table to the component verdicts of `report`
/// (its classification field is ignored).
Classification classify(const ConditionReport& report);

/// Runs the whole battery and classifies.
ConditionReport evaluate_conditions(const ProblemSpec& spec, CheckOptions opts = {});

/// Flat key/value rendering, stable key order.
std::vector<std::pair<std::string, std::string>> to_key_values(const ConditionReport& report);
/// CSV rows "condition,status,method,detail" (header included).
std::vector<std::string> to_csv_rows(const ConditionReport& report);

enum class ImplicationVerdict { consistent, vacuous, violated, inconclusive };
std::string_view to_string(ImplicationVerdict v);

struct ImplicationCheck {
  ImplicationVerdict verdict = ImplicationVerdict::inconclusive;
  ImproperIntegralVerdict hypothesis;
  std::vector<ImproperIntegralVerdict> conclusions;
  std::string note;

  /// Vacuous implications count as consistent.
  bool consistent() const noexcept {
    return verdict == ImplicationVerdict::consistent || verdict == ImplicationVerdict::vacuous;
  }
};

struct GrowthImplications {
  /// Hypotheses hold => int_1^inf (int_0^t f_i(s,...,s) ds)^{-1/2} dt = inf for every i.
  ImplicationCheck componentwise;
  /// int_1^inf (sum_i f_i(s,...,s))^{-1} ds = inf => Keller-Osserman divergence.
  ImplicationCheck reciprocal_growth;
};

GrowthImplications check_growth_implications(const BigF& f, CheckOptions opts = {});

}  // namespace elliptic
