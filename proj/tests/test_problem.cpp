#include <doctest.h>

#include <cmath>
#include <random>

#include "elliptic/errors.hpp"
#include "elliptic/problem.hpp"

using namespace elliptic;

namespace {

using CF = CoefficientFamily;
using NF = NonlinearityFamily;

std::vector<CF> all_coefficients() {
  return {CF::constant(1.5),        CF::power_decay(2.0, 4.0),
          CF::rational_decay(1.0, 1.0), CF::gaussian(0.7),
          CF::anisotropic_rational(1.0, 1.0, {1.0, 4.0, 4.0}),
          CF::anisotropic_rational(2.0, 3.0, {0.5, 1.0, 2.0}),
          CF::anisotropic_rational(1.0, 2.0, {3.0, 3.0, 3.0})};
}

const HypothesisCheck& find(const std::vector<HypothesisCheck>& checks, const std::string& id) {
  for (const auto& c : checks) {
    if (c.id == id) return c;
  }
  FAIL("missing audit entry " << id);
  return checks.front();
}

}  // namespace

TEST_CASE("coefficient families are nonnegative and finite") {
  const double probes[][3] = {{0, 0, 0}, {1, 0, 0}, {0, 2, -1}, {30, -40, 5}, {1e3, 1e3, 1e3}};
  for (const CF& c : all_coefficients()) {
    for (const auto& x : probes) {
      const double v = c(std::span<const double>(x, 3));
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
    }
  }
  CHECK_THROWS_AS(CF::constant(-1.0), PreconditionError);
  CHECK_THROWS_AS(CF::power_decay(-0.5, 2.0), PreconditionError);
  CHECK_THROWS_AS(CF::from_name("nope", std::vector<double>{1.0}), PreconditionError);
  CHECK_THROWS_AS(CF::from_name("power_decay", std::vector<double>{1.0}), PreconditionError);
}

TEST_CASE("radial flags") {
  CHECK(CF::gaussian(1.0).is_radial());
  CHECK_FALSE(CF::anisotropic_rational(1.0, 1.0, {1.0, 4.0, 4.0}).is_radial());
  CHECK(CF::anisotropic_rational(1.0, 1.0, {2.0, 2.0, 2.0}).is_radial());
}

TEST_CASE("sphere extremizers: documented examples") {
  const CF aniso = CF::anisotropic_rational(1.0, 1.0, {1.0, 4.0, 4.0});
  CHECK(sphere_max(aniso, 1.0, 3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sphere_min(aniso, 1.0, 3) == doctest::Approx(0.2).epsilon(1e-15));
  for (const CF& c : all_coefficients()) {
    const double origin[3] = {0, 0, 0};
    CHECK(sphere_max(c, 0.0, 3) == c(std::span<const double>(origin, 3)));
    CHECK(sphere_min(c, 0.0, 3) == c(std::span<const double>(origin, 3)));
  }
}

TEST_CASE("radial families: phi == psi == p exactly") {
  for (const CF& c : all_coefficients()) {
    if (!c.is_radial()) continue;
    for (double t = 0.0; t < 50.0; t += 0.37) {
      CHECK(sphere_max(c, t, 3) == c.radial(t));
      CHECK(sphere_min(c, t, 3) == c.radial(t));
    }
  }
}

TEST_CASE("phi >= psi everywhere") {
  for (const CF& c : all_coefficients()) {
    for (double t = 0.0; t < 100.0; t += 0.71) CHECK(sphere_max(c, t, 3) >= sphere_min(c, t, 3));
  }
}

TEST_CASE("sphere extremizers agree with brute-force direction sampling") {
  // Fibonacci lattice: 2e4 quasi-uniform directions on the unit sphere.
  const std::size_t n = 20000;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (const CF& c : all_coefficients()) {
    if (c.is_radial()) continue;
    for (double t : {0.3, 1.0, 2.5, 10.0}) {
      double hi = 0.0, lo = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n; ++k) {
        const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
        const double rho = std::sqrt(1.0 - z * z);
        const double th = golden * static_cast<double>(k);
        const double x[3] = {t * rho * std::cos(th), t * rho * std::sin(th), t * z};
        const double v = c(std::span<const double>(x, 3));
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
      CHECK(std::abs(hi - sphere_max(c, t, 3)) / sphere_max(c, t, 3) < 1e-3);
      CHECK(std::abs(lo - sphere_min(c, t, 3)) / sphere_min(c, t, 3) < 1e-3);
    }
  }
}

TEST_CASE("nonlinearity families: f(0) = 0 and positivity") {
  const std::vector<NF> fs = {NF::power(0.5), NF::power(2.0), NF::linear_mix({1.0, 0.5}), NF::log_growth(),
                              NF::product_root({0.5, 0.5})};
  for (const NF& f : fs) {
    const std::vector<double> zero(2, 0.0);
    CHECK(f(zero) == 0.0);
  }
  const std::vector<double> one_sided = {1.0, 0.0};
  CHECK(NF::power(2.0)(one_sided) > 0.0);
  CHECK(NF::linear_mix({1.0, 0.5})(one_sided) > 0.0);
  CHECK(NF::product_root({0.5, 0.5})(one_sided) == 0.0);
  CHECK_FALSE(NF::product_root({0.5, 0.5}).c1_strict());
  CHECK(NF::constant(1.0).oracle_only());
}

TEST_CASE("big_f_eval examples") {
  const BigF lin({NF::linear_mix({1.0})}, 1);
  CHECK(big_f_eval(lin, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(big_f_eval(lin, 0.0) == 0.0);
  const BigF sq({NF::power(2.0)}, 1);
  CHECK(big_f_eval(sq, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  const BigF lg({NF::log_growth()}, 1);
  CHECK(big_f_eval(lg, 0.0) == 0.0);
  CHECK_THROWS_AS(big_f_eval(lg, -1.0), PreconditionError);
}

TEST_CASE("big_f_eval is nondecreasing and additive over intervals") {
  const std::vector<BigF> fs = {BigF({NF::log_growth()}, 1), BigF({NF::power(1.5), NF::linear_mix({1.0, 2.0})}, 2),
                                BigF({NF::product_root({0.5, 0.5}), NF::power(0.5)}, 2)};
  for (const BigF& f : fs) {
    double prev = 0.0;
    for (double s = 0.0; s < 20.0; s += 0.25) {
      const double v = big_f_eval(f, s);
      CHECK(v >= prev);
      prev = v;
    }
    for (double a : {0.5, 2.0}) {
      for (double s : {3.0, 7.5}) {
        const double direct = big_f_eval(f, s);
        const double split = big_f_eval(f, a) + f.integral(a, s);
        CHECK(std::abs(direct - split) <= 1e-10 * direct);
      }
    }
  }
}

TEST_CASE("problem spec validation") {
  CHECK_THROWS_AS(ProblemSpec(2, {CF::constant(1.0)}, {NF::power(1.0)}), PreconditionError);
  CHECK_THROWS_AS(ProblemSpec(3, {CF::constant(1.0)}, {NF::power(1.0), NF::power(1.0)}), PreconditionError);
  CHECK_THROWS_AS(ProblemSpec(3, {CF::constant(1.0)}, {NF::power(1.0)}, 0.0), PreconditionError);
  CHECK_THROWS_AS(ProblemSpec(3, {CF::constant(1.0)}, {NF::linear_mix({1.0, 1.0})}), PreconditionError);
  CHECK_THROWS_AS(ProblemSpec(3, {CF::anisotropic_rational(1.0, 1.0, {1.0, 2.0})}, {NF::power(1.0)}),
                  PreconditionError);
  const ProblemSpec ok(3, {CF::power_decay(1.0, 4.0)}, {NF::linear_mix({1.0})});
  CHECK(ok.components() == 1);
  CHECK(ok.scaled(3.0).coefficient(0).radial(2.0) == doctest::Approx(3.0 * ok.coefficient(0).radial(2.0)));
}

TEST_CASE("hypothesis audit examples") {
  const ProblemSpec plain(3, {CF::constant(1.0)}, {NF::power(1.0)});
  const auto checks = hypothesis_audit(plain);
  CHECK(checks.size() == 3);
  CHECK(audit_passes(checks));
  for (const auto& c : checks) CHECK(c.verdict == AuditVerdict::pass);

  const ProblemSpec rooted(3, {CF::constant(1.0), CF::constant(1.0)},
                           {NF::product_root({0.5, 0.5}), NF::power(1.0)});
  const auto flagged = hypothesis_audit(rooted);
  CHECK(find(flagged, "f_zero_positive").verdict == AuditVerdict::flagged);
  CHECK_FALSE(audit_passes(flagged));
}

TEST_CASE("audit lattice size is capped") {
  CHECK(audit_lattice_points_per_axis(1) == 21);
  CHECK(audit_lattice_points_per_axis(2) == 21);
  for (std::size_t d = 1; d <= 8; ++d) {
    CHECK(std::pow(static_cast<double>(audit_lattice_points_per_axis(d)), static_cast<double>(d)) <= 1e5);
  }
}
