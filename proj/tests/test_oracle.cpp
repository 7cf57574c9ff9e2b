#include <doctest.h>

#include <cmath>

#include "elliptic/errors.hpp"
#include "elliptic/oracle.hpp"

using namespace elliptic;

namespace {

using CF = CoefficientFamily;
using NF = NonlinearityFamily;

GridPtr uniform(double r_max, std::size_t n) {
  return std::make_shared<const RadialGrid>(RadialGrid::uniform(r_max, n));
}

const ClosedFormFixture& fixture(const std::string& name) {
  static const auto library = closed_form_library();
  for (const auto& f : library) {
    if (f.name == name) return f;
  }
  throw std::runtime_error("missing fixture " + name);
}

double max_rel_error(const ShootingResult& shot, const ClosedFormFixture& fx) {
  double worst = 0.0;
  const RadialGrid& g = *shot.trajectory.front().grid;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto exact = fx.value(g.node(n));
    for (std::size_t i = 0; i < exact.size(); ++i) {
      worst = std::max(worst, std::abs(shot.trajectory[i][n] - exact[i]) / std::abs(exact[i]));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("zero coefficients keep the initial values") {
  const ProblemSpec zero(3, {CF::constant(0.0), CF::constant(0.0)}, {NF::power(2.0), NF::power(2.0)});
  const std::vector<double> init = {0.25, 3.0};
  const ShootingResult shot = shoot(zero, init, uniform(4.0, 101));
  for (std::size_t i = 0; i < 2; ++i) {
    for (double x : shot.trajectory[i].values) CHECK(x == init[i]);
  }
}

TEST_CASE("sinh fixture at step 1e-3") {
  const auto& fx = fixture("sinh");
  const ShootingResult shot = shoot(fx.spec, fx.initial, uniform(fx.r_max, static_cast<std::size_t>(fx.r_max / 1e-3) + 1));
  CHECK(shot.step_size == doctest::Approx(1e-3));
  CHECK(shot.method_order == 4);
  CHECK(max_rel_error(shot, fx) < 1e-8);
  CHECK(shot.trajectory[0][0] == fx.initial[0]);
  CHECK(shot.derivative_trace[0][0] == 0.0);
}

TEST_CASE("constant forcing fixtures") {
  const auto& n3 = fixture("constant_forcing_N3");
  const ShootingResult s3 = shoot(n3.spec, n3.initial, uniform(10.0, 1001));
  CHECK(max_rel_error(s3, n3) < 1e-9);
  const auto& n4 = fixture("constant_forcing_N4");
  CHECK(n4.spec.dimension() == 4);
  const ShootingResult s4 = shoot(n4.spec, n4.initial, uniform(10.0, 1001));
  for (std::size_t n = 0; n < s4.trajectory[0].size(); ++n) {
    const double r = s4.trajectory[0].grid->node(n);
    CHECK(s4.trajectory[0][n] == doctest::Approx(n4.initial[0] + r * r / 8.0).epsilon(1e-9));
  }
}

TEST_CASE("closed-form library satisfies its equations") {
  const auto library = closed_form_library();
  CHECK(library.size() >= 3);
  for (const auto& fx : library) {
    CAPTURE(fx.name);
    CHECK_FALSE(fx.provenance.empty());
    const int N = fx.spec.dimension();
    for (double r = 0.05; r < fx.r_max; r += 0.173) {
      const auto u = fx.value(r), du = fx.derivative(r), d2u = fx.second_derivative(r);
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double p = fx.spec.coefficient(i).radial(r);
        const double f = p == 0.0 ? 0.0 : fx.spec.nonlinearity(i)(u);
        // (r^{N-1} u')' / r^{N-1} = u'' + (N - 1) u' / r
        const double lhs = d2u[i] + (N - 1) * du[i] / r;
        CHECK(std::abs(lhs - p * f) <= 1e-10 * std::max(1.0, std::abs(p * f)));
      }
    }
  }
}

TEST_CASE("trajectories are nondecreasing") {
  const ProblemSpec spec(3, {CF::gaussian(1.0), CF::power_decay(2.0, 3.0)},
                         {NF::power(0.5), NF::linear_mix({0.5, 1.0})});
  const ShootingResult shot = shoot(spec, std::vector<double>{0.5, 0.5}, uniform(10.0, 2001));
  for (const auto& d : shot.derivative_trace) {
    for (double x : d.values) CHECK(x >= -1e-12);
  }
}

TEST_CASE("fourth-order convergence") {
  const auto& fx = fixture("sinh");
  for (std::size_t n : {101u, 401u, 1601u}) {
    const double coarse = max_rel_error(shoot(fx.spec, fx.initial, uniform(5.0, n)), fx);
    const double fine = max_rel_error(shoot(fx.spec, fx.initial, uniform(5.0, 2 * n - 1)), fx);
    CAPTURE(n);
    CHECK(coarse / fine >= 12.0);
  }
}

TEST_CASE("cross validation") {
  const ProblemSpec zero(3, {CF::constant(0.0)}, {NF::power(1.0)});
  const GridPtr g = uniform(3.0, 301);
  const SolveOutcome pz = solve_lower(zero, g);
  const CrossValidation cz = cross_validate(pz, shoot(zero, std::vector<double>{1.0}, g, Profile::sphere_max));
  CHECK(cz.passed);
  CHECK(cz.sup_abs == 0.0);

  const auto& fx = fixture("sinh");
  const GridPtr fine = uniform(5.0, 5001);
  SolveOptions o;
  o.base_override = fx.initial[0];
  const SolveOutcome ps = solve_lower(fx.spec, fine, o);
  const CrossValidation cs = cross_validate(ps, shoot(fx.spec, fx.initial, fine, Profile::sphere_max));
  CHECK(cs.passed);
  CHECK(cs.sup_rel < 1e-6);

  // Base mismatch is a caller error.
  CHECK_THROWS_AS(cross_validate(ps, shoot(fx.spec, std::vector<double>{2.0}, fine)), PreconditionError);
}

TEST_CASE("blow-up compares the finite prefix only") {
  const ProblemSpec spec(3, {CF::constant(1.0)}, {NF::power(2.0)});
  const GridPtr g = uniform(10.0, 2001);
  SolveOptions o;
  o.blow_up_ceiling = 1e6;
  o.base_override = 1.0;
  const SolveOutcome picard = solve_lower(spec, g, o);
  const ShootingResult shot = shoot(spec, std::vector<double>{1.0}, g, Profile::sphere_max, 1e6);
  CHECK(shot.blow_up);
  CHECK(shot.valid_nodes < g->size());
  const CrossValidation cv = cross_validate(picard, shot);
  CHECK(cv.prefix_only);
  CHECK(cv.compared_nodes <= shot.valid_nodes);
  CHECK_FALSE(cv.note.empty());
}
