#include <doctest.h>

#include <cmath>

#include "elliptic/conditions.hpp"

using namespace elliptic;

namespace {

using CF = CoefficientFamily;
using NF = NonlinearityFamily;

ProblemSpec scalar(CF p, NF f = NF::linear_mix({1.0}), double eps = 0.5) {
  return ProblemSpec(3, {std::move(p)}, {std::move(f)}, eps);
}

const CF kConstant = CF::constant(1.0);
const CF kDecay4 = CF::power_decay(1.0, 4.0);
const CF kDecay3 = CF::power_decay(1.0, 3.0);
const CF kGauss = CF::gaussian(1.0);
const CF kRational1 = CF::rational_decay(1.0, 1.0);
const CF kAniso = CF::anisotropic_rational(1.0, 1.0, {1.0, 4.0, 4.0});

bool opposite(Convergence a, Convergence b) {
  return (a == Convergence::converges && b == Convergence::diverges) ||
         (a == Convergence::diverges && b == Convergence::converges);
}

}  // namespace

TEST_CASE("closed-form tier is decisive") {
  CHECK(closed_form_verdict(-1.0).status == Convergence::diverges);
  CHECK(closed_form_verdict(-1.0000001).status == Convergence::converges);
  CHECK(closed_form_verdict(-INFINITY).status == Convergence::converges);
  CHECK(closed_form_verdict(0.5).method == VerdictMethod::closed_form_exponent);
}

TEST_CASE("numeric tier thresholds") {
  const auto div = numeric_extrapolation([](double t) { return 1.0 / std::sqrt(1.0 + t); }, 0.0);
  CHECK(div.status == Convergence::diverges);
  CHECK(div.slope >= kExtrapolationThreshold);
  CHECK(div.lambdas.size() == 4);
  const auto conv = numeric_extrapolation([](double t) { return 1.0 / (1.0 + t * t); }, 0.0);
  CHECK(conv.status == Convergence::converges);
  CHECK(conv.slope <= -kExtrapolationThreshold);
  // 1 / (1 + t) diverges only logarithmically: Lambda times the integrand is
  // flat, so the protocol cannot decide.
  const auto slow = numeric_extrapolation([](double t) { return 1.0 / (1.0 + t); }, 0.0);
  CHECK(slow.status == Convergence::inconclusive);
  CHECK(std::abs(slow.slope) < kExtrapolationThreshold);
}

TEST_CASE("Keller-Osserman examples") {
  CHECK(check_keller_osserman(BigF({NF::linear_mix({1.0})}, 1)).status == Convergence::diverges);
  CHECK(check_keller_osserman(BigF({NF::power(3.0)}, 1)).status == Convergence::converges);
  CHECK(check_keller_osserman(BigF({NF::power(1.0)}, 1)).status == Convergence::diverges);
  CHECK(check_keller_osserman(BigF({NF::power(0.5)}, 1)).status == Convergence::diverges);
  // s log(1 + s): the integral diverges like sqrt(log s); the numeric slope over
  // 1e2..1e4 is about -0.075, so the protocol honestly reports inconclusive.
  const auto borderline = check_keller_osserman(BigF({NF::log_growth()}, 1));
  CHECK(borderline.method == VerdictMethod::numeric_extrapolation);
  CHECK(borderline.status != Convergence::converges);
}

TEST_CASE("phi moment examples") {
  CHECK(check_phi_moment(scalar(kDecay4), 0.5).status == Convergence::converges);
  CHECK(check_phi_moment(scalar(kDecay4), 0.5).tail_exponent == doctest::Approx(-2.5));
  for (double eps : {0.1, 0.5, 1.0, 3.0}) CHECK(check_phi_moment(scalar(kConstant), eps).status == Convergence::diverges);
  CHECK(check_phi_moment(scalar(kGauss), 1.0).status == Convergence::converges);
}

TEST_CASE("psi moment examples") {
  CHECK(check_psi_moment(scalar(kConstant)).status == Convergence::diverges);
  CHECK(check_psi_moment(scalar(kDecay4)).status == Convergence::converges);
  CHECK(check_psi_moment(scalar(kDecay4)).tail_exponent == doctest::Approx(-3.0));
  CHECK(check_psi_moment(scalar(kAniso)).status == Convergence::diverges);
}

TEST_CASE("Green divergence examples") {
  CHECK(check_green_divergence(scalar(kConstant)).at(0).status == Convergence::diverges);
  CHECK(check_green_divergence(scalar(kDecay4)).at(0).status == Convergence::converges);
  CHECK(check_green_divergence(scalar(kRational1)).at(0).status == Convergence::diverges);
  const auto numeric = check_green_divergence(scalar(kRational1), {.force_numeric = true}).at(0);
  CHECK(numeric.method == VerdictMethod::numeric_extrapolation);
  CHECK(numeric.status != Convergence::converges);
}

TEST_CASE("p moment examples") {
  CHECK(check_p_moment(scalar(kConstant), 0.5).status == Convergence::diverges);
  CHECK(check_p_moment(scalar(kDecay4), 0.5).status == Convergence::converges);
  CHECK(check_p_moment(scalar(kDecay3), 0.5).status == Convergence::converges);
  CHECK(check_p_moment(scalar(kAniso), 0.5).status == Convergence::not_applicable);
}

TEST_CASE("monotonicity examples") {
  const auto c = check_monotonicity(scalar(kConstant), Profile::radial);
  CHECK(c.holds());
  CHECK(c.holds_from_R == 0.0);
  const auto d = check_monotonicity(scalar(kDecay4), Profile::radial);
  CHECK(d.holds());
  CHECK(d.holds_from_R == 0.0);
  CHECK(check_monotonicity(scalar(kGauss), Profile::radial).status == MonotonicityResult::Status::fails);
  CHECK(check_monotonicity(scalar(CF::power_decay(1.0, 5.0)), Profile::radial).status ==
        MonotonicityResult::Status::fails);
}

TEST_CASE("numeric tier never contradicts the closed form") {
  const std::vector<CF> coeffs = {kConstant, kDecay4, kDecay3, kRational1, CF::rational_decay(1.0, 2.0),
                                  CF::power_decay(1.0, 2.0), kGauss, kAniso};
  const CheckOptions numeric{.force_numeric = true};
  for (const CF& p : coeffs) {
    const ProblemSpec spec = scalar(p);
    for (double eps : {0.1, 0.5, 1.0}) {
      CHECK_FALSE(opposite(check_phi_moment(spec, eps).status, check_phi_moment(spec, eps, numeric).status));
    }
    CHECK_FALSE(opposite(check_psi_moment(spec).status, check_psi_moment(spec, numeric).status));
    if (spec.is_radial()) {
      CHECK_FALSE(opposite(check_green_divergence(spec)[0].status, check_green_divergence(spec, numeric)[0].status));
      CHECK_FALSE(opposite(check_p_moment(spec, 0.1).status, check_p_moment(spec, 0.1, numeric).status));
    }
  }
  for (double g : {0.5, 1.0, 1.5, 3.0}) {
    const BigF f({NF::power(g)}, 1);
    CHECK_FALSE(opposite(check_keller_osserman(f).status, check_keller_osserman(f, numeric).status));
  }
}

TEST_CASE("scaling covariance of every verdict") {
  for (const CF& p : {kConstant, kDecay4, kRational1, kGauss, kAniso}) {
    const ProblemSpec a = scalar(p);
    const ProblemSpec b = a.scaled(17.5);
    CHECK(check_phi_moment(a, 0.5).status == check_phi_moment(b, 0.5).status);
    CHECK(check_psi_moment(a).status == check_psi_moment(b).status);
    CHECK(check_green_divergence(a)[0].status == check_green_divergence(b)[0].status);
    CHECK(evaluate_conditions(a).classification.verdict == evaluate_conditions(b).classification.verdict);
  }
}

TEST_CASE("classification examples") {
  const auto bounded = evaluate_conditions(scalar(kDecay4));
  CHECK(bounded.classification.verdict == Verdict::BoundedExists);
  CHECK_FALSE(bounded.classification.reports(Verdict::NoBoundedRadial));

  const auto large = evaluate_conditions(scalar(kConstant));
  CHECK(large.classification.reports(Verdict::NoBoundedRadial));
  CHECK(large.classification.reports(Verdict::AllRadialSolutionsLarge));
  CHECK(large.classification.verdict == Verdict::NoBoundedRadial);

  // Anisotropic sigma = 1: psi(t) = (1 + 4t^2)^-1, so t psi(t) ~ 1/(4t) diverges.
  const auto aniso = evaluate_conditions(scalar(CF::anisotropic_rational(1.0, 1.0, {1.0, 4.0, 4.0}), NF::linear_mix({1.0}), 0.5));
  CHECK(aniso.psi_moment.status == Convergence::diverges);
  CHECK(aniso.classification.reports(Verdict::NoBoundedRadial));
  CHECK(aniso.p_moment.status == Convergence::not_applicable);
}

TEST_CASE("classification of a synthetic inconsistent report") {
  // Both halves of the existence criterion hold at once: only possible when
  // phi and psi differ, so the report is assembled by hand.
  ConditionReport r = evaluate_conditions(scalar(kDecay4));
  r.radial = false;
  r.psi_moment = closed_form_verdict(-1.0);
  const Classification c = classify(r);
  CHECK(c.verdict == Verdict::BoundedExists);
  CHECK(c.reports(Verdict::NoBoundedRadial));
  CHECK_FALSE(c.notes.empty());
}

TEST_CASE("radial specs never report both bounded and no-bounded clauses") {
  for (const CF& p : {kConstant, kDecay4, kDecay3, kRational1, kGauss, CF::power_decay(2.0, 2.5)}) {
    const auto c = evaluate_conditions(scalar(p)).classification;
    CHECK_FALSE((c.reports(Verdict::BoundedExists) && c.reports(Verdict::NoBoundedRadial)));
  }
}

TEST_CASE("mixed Green-divergence cases stay inconclusive for the largeness clause") {
  const ProblemSpec mixed(3, {kConstant, kDecay4}, {NF::linear_mix({0.5, 0.5}), NF::linear_mix({0.5, 0.5})});
  const auto r = evaluate_conditions(mixed);
  CHECK(r.green_divergence.size() == 2);
  CHECK_FALSE(r.classification.reports(Verdict::AllRadialSolutionsLarge));
}

TEST_CASE("inconclusive verdict when Keller-Osserman is undecided") {
  const auto r = evaluate_conditions(scalar(kGauss, NF::log_growth()));
  CHECK(r.keller_osserman.status == Convergence::inconclusive);
  CHECK(r.classification.verdict == Verdict::Inconclusive);
}

TEST_CASE("growth implication cross-checks") {
  const auto lin = check_growth_implications(BigF({NF::linear_mix({1.0})}, 1));
  CHECK(lin.reciprocal_growth.verdict == ImplicationVerdict::consistent);
  const auto sq = check_growth_implications(BigF({NF::power(2.0)}, 1));
  CHECK(sq.reciprocal_growth.verdict == ImplicationVerdict::vacuous);
  const auto sym = check_growth_implications(BigF({NF::linear_mix({1.0, 1.0}), NF::linear_mix({1.0, 1.0})}, 2));
  CHECK(sym.componentwise.verdict == ImplicationVerdict::consistent);
  for (const auto& c : sym.componentwise.conclusions) CHECK(c.status == Convergence::diverges);
}

TEST_CASE("serialization is flat and stable") {
  const auto r = evaluate_conditions(scalar(kDecay4));
  const auto kv = to_key_values(r);
  const auto again = to_key_values(evaluate_conditions(scalar(kDecay4)));
  CHECK(kv == again);
  bool has_verdict = false;
  for (const auto& [k, v] : kv) {
    if (k == "verdict") has_verdict = v == "BoundedExists";
  }
  CHECK(has_verdict);
  const auto rows = to_csv_rows(r);
  REQUIRE_FALSE(rows.empty());
  CHECK(rows.front() == "condition,status,method,detail");
}
