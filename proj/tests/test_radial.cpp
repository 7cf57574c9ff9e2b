#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "elliptic/errors.hpp"
#include "elliptic/radial.hpp"

using namespace elliptic;

namespace {

GridPtr uniform(double r_max, std::size_t n) {
  return std::make_shared<const RadialGrid>(RadialGrid::uniform(r_max, n));
}

double max_abs_error(const RadialFunction& f, double (*exact)(double)) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    worst = std::max(worst, std::abs(f[i] - exact(f.grid->node(i))));
  }
  return worst;
}

}  // namespace

TEST_CASE("grid invariants") {
  for (Spacing s : {Spacing::uniform, Spacing::graded}) {
    const RadialGrid g = RadialGrid::make(7.5, 301, s);
    CHECK(g.node(0) == 0.0);
    CHECK(g.r_max() == doctest::Approx(7.5).epsilon(1e-15));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.node(i) > g.node(i - 1));
    const auto w = g.quad_weights();
    // Each per-interval weight applies to both endpoints of the interval.
    const double total = 2.0 * std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(std::abs(total - g.r_max()) / g.r_max() < 1e-12);
  }
  CHECK_THROWS_AS(RadialGrid::uniform(1.0, 15), PreconditionError);
  CHECK_THROWS_AS(RadialGrid::uniform(-1.0, 100), PreconditionError);
  CHECK_THROWS_AS(RadialGrid::graded(1.0, 100, 1.2), PreconditionError);
  CHECK_THROWS_AS(RadialGrid({0.0, 1.0, 0.5, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14}, Spacing::uniform),
                  PreconditionError);
  CHECK_THROWS_AS(RadialGrid({0.1, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}, Spacing::uniform),
                  PreconditionError);
}

TEST_CASE("graded grid spacing ratio and density near the origin") {
  const RadialGrid g = RadialGrid::graded(10.0, 400);
  for (std::size_t i = 1; i < g.intervals(); ++i) {
    const double ratio = g.spacing(i) / g.spacing(i - 1);
    CHECK(ratio <= RadialGrid::kMaxGradedRatio + 1e-12);
    CHECK(ratio >= 1.0);
  }
  CHECK(g.spacing(0) < g.spacing(g.intervals() - 1));
}

TEST_CASE("radial functions reject non-finite samples unless flagged") {
  const GridPtr g = uniform(1.0, 16);
  std::vector<double> v(16, 1.0);
  v[3] = std::nan("");
  CHECK_THROWS_AS(RadialFunction(g, v), DataError);
  CHECK_NOTHROW(RadialFunction(g, v, true));
  CHECK_THROWS_AS(RadialFunction(g, std::vector<double>(15, 1.0)), DataError);
}

TEST_CASE("dimension must be at least three") {
  CHECK_THROWS_AS(GreenOperator(uniform(1.0, 16), 2), PreconditionError);
}

TEST_CASE("cumulative_inner examples") {
  const GridPtr g = uniform(2.0, 201);
  const auto zero = cumulative_inner(RadialFunction::sample(g, [](double) { return 0.0; }), 3);
  CHECK(std::all_of(zero.values.begin(), zero.values.end(), [](double x) { return x == 0.0; }));
  const auto one = cumulative_inner(RadialFunction::sample(g, [](double) { return 1.0; }), 3);
  CHECK(max_abs_error(one, [](double t) { return t * t * t / 3.0; }) < 1e-12);
  const auto lin = cumulative_inner(RadialFunction::sample(g, [](double s) { return s; }), 3);
  CHECK(max_abs_error(lin, [](double t) { return t * t * t * t / 4.0; }) < 1e-12);
}

TEST_CASE("green_apply examples") {
  const GridPtr g = uniform(3.0, 301);
  const auto zero = green_apply(RadialFunction::sample(g, [](double) { return 0.0; }), 3);
  CHECK(std::all_of(zero.values.begin(), zero.values.end(), [](double x) { return x == 0.0; }));
  const auto one = green_apply(RadialFunction::sample(g, [](double) { return 1.0; }), 3);
  CHECK(max_abs_error(one, [](double r) { return r * r / 6.0; }) < 1e-12);
  const auto quad = green_apply(RadialFunction::sample(g, [](double s) { return 1.0 + s * s / 6.0; }), 3);
  CHECK(max_abs_error(quad, [](double r) { return r * r / 6.0 + r * r * r * r / 120.0; }) < 1e-4);
}

TEST_CASE("derivative trace equals r^{1-N} times the inner integral") {
  const GridPtr g = uniform(2.0, 101);
  const GreenOperator green(g, 4);
  std::vector<double> src(g->size()), out(g->size()), deriv(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) src[i] = 1.0;
  green.apply_raw(src, out, deriv);
  for (std::size_t i = 1; i < g->size(); ++i) {
    CHECK(deriv[i] == doctest::Approx(g->node(i) / 4.0).epsilon(1e-12));
  }
  CHECK(deriv[0] == 0.0);
}

TEST_CASE("positivity and linearity") {
  const auto g = std::make_shared<const RadialGrid>(RadialGrid::graded(8.0, 500));
  const auto a_fn = RadialFunction::sample(g, [](double r) { return std::exp(-r) * (1.0 + std::sin(3.0 * r) * 0.5); });
  const auto b_fn = RadialFunction::sample(g, [](double r) { return 1.0 / (1.0 + r * r); });
  const auto ga = green_apply(a_fn, 3);
  const auto gb = green_apply(b_fn, 3);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(ga[i] >= 0.0);
    if (i > 0) CHECK(ga[i] >= ga[i - 1]);
  }
  const double a = 2.5, b = 0.75;
  std::vector<double> mix(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) mix[i] = a * a_fn[i] + b * b_fn[i];
  const auto gm = green_apply(RadialFunction(g, mix), 3);
  for (std::size_t i = 1; i < g->size(); ++i) {
    const double expect = a * ga[i] + b * gb[i];
    CHECK(std::abs(gm[i] - expect) <= 1e-12 * std::abs(expect));
  }
}

TEST_CASE("second-order convergence under grid halving") {
  auto error = [](std::size_t n) {
    const GridPtr g = uniform(3.0, n);
    const auto out = green_apply(RadialFunction::sample(g, [](double s) { return 1.0 + s * s / 6.0; }), 3);
    return max_abs_error(out, [](double r) { return r * r / 6.0 + r * r * r * r / 120.0; });
  };
  const double coarse = error(61), fine = error(121), finer = error(241);
  CHECK(coarse / fine >= 3.5);
  CHECK(fine / finer >= 3.5);
}

TEST_CASE("discrete radial Laplacian reproduces the source") {
  auto error = [](std::size_t n) {
    const GridPtr g = uniform(2.0, n);
    const auto src = RadialFunction::sample(g, [](double r) { return std::cos(r) + 2.0; });
    auto w = green_apply(src, 3);
    for (double& x : w.values) x += 0.5;
    const auto lap = radial_laplacian(w, 3);
    // The flux stencil's truncation error scales like h^2 / r^2, so nodes within
    // a few spacings of the origin are excluded from the order check.
    double worst = 0.0;
    for (std::size_t i = 0; i < lap.size(); ++i) {
      if (g->node(i + 1) < 0.2) continue;
      worst = std::max(worst, std::abs(lap[i] - src[i + 1]));
    }
    return worst;
  };
  const double e1 = error(101), e2 = error(201);
  CHECK(e1 < 1e-2);
  CHECK(e1 / e2 > 3.0);
}

TEST_CASE("interpolation and lookup") {
  const GridPtr g = uniform(1.5, 16);
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * g->node(i) + 1.0;
  CHECK(g->interpolate(v, 0.37) == doctest::Approx(1.74));
  CHECK(g->nearest_node(0.51) == 5);
  CHECK(g->locate(1.5) == g->intervals() - 1);
}
