#include "elliptic/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "elliptic/detail/gauss.hpp"
#include "elliptic/errors.hpp"
#include "elliptic/format.hpp"

namespace elliptic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Right-hand side of (u, m): u_i' = m_i r^{1-N}, m_i' = r^{N-1} c_i(r) f_i(u).
class RadialSystem {
 public:
  RadialSystem(const ProblemSpec& spec, Profile which) : spec_(spec), which_(which) {}

  std::size_t d() const { return spec_.components(); }

  double coefficient(std::size_t i, double r) const { return spec_.coefficient(i).profile(which_, r); }
  double nonlinearity(std::size_t i, std::span<const double> u) const { return spec_.nonlinearity(i)(u); }

  // y = (u_1..u_d, m_1..m_d), r > 0.
  void rhs(double r, std::span<const double> y, std::span<double> dy) const {
    const std::size_t n = d();
    const int N = spec_.dimension();
    const double lift = std::pow(r, N - 1.0);
    const std::span<const double> u = y.first(n);
    for (std::size_t i = 0; i < n; ++i) {
      dy[i] = y[n + i] / lift;
      const double c = coefficient(i, r);
      dy[n + i] = c == 0.0 ? 0.0 : lift * c * nonlinearity(i, u);
    }
  }

 private:
  const ProblemSpec& spec_;
  Profile which_;
};

// State at r = h from the integral form with the quadratic series inside:
//   m_i(t) = t^N int_0^1 s^{N-1} c_i(ts) f_i(u_hat(ts)) ds,
//   u_i(h) = u_i(0) + int_0^h t^{1-N} m_i(t) dt.
void series_start(const RadialSystem& sys, int N, std::span<const double> u0, double h,
                  std::span<double> y) {
  const std::size_t d = sys.d();
  std::vector<double> a(d);
  for (std::size_t i = 0; i < d; ++i) a[i] = sys.coefficient(i, 0.0) * sys.nonlinearity(i, u0);
  std::vector<double> u_hat(d);
  auto scaled_inner = [&](std::size_t i, double t) {
    // int_0^1 s^{N-1} c_i(ts) f_i(u_hat(ts)) ds
    return detail::gauss_panel(
        [&](double s) {
          const double r = t * s;
          for (std::size_t j = 0; j < d; ++j) u_hat[j] = u0[j] + a[j] * r * r / (2.0 * N);
          const double c = sys.coefficient(i, r);
          return c == 0.0 ? 0.0 : std::pow(s, N - 1.0) * c * sys.nonlinearity(i, u_hat);
        },
        0.0, 1.0);
  };
  for (std::size_t i = 0; i < d; ++i) {
    y[d + i] = std::pow(h, N) * scaled_inner(i, h);
    // t^{1-N} m_i(t) = t * scaled_inner(t)
    y[i] = u0[i] + detail::gauss_panel([&](double t) { return t * scaled_inner(i, t); }, 0.0, h);
  }
}

void rk4_step(const RadialSystem& sys, double r, double h, std::vector<double>& y,
              std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
              std::vector<double>& k4, std::vector<double>& tmp) {
  const std::size_t n = y.size();
  sys.rhs(r, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  sys.rhs(r + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  sys.rhs(r + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  sys.rhs(r + h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// RK4 on u' = r^{1-N} m has local error ~ h^5 r^{-3} near the origin, which
// sums to O(h^2) over the first nodes. Splitting [r, r + h] into ceil(l / r)
// substeps (substep h r / l) keeps the global error O(h^4).
constexpr double kSubstepLength = 1.0;

std::size_t substeps(double r) {
  if (r >= kSubstepLength) return 1;
  return static_cast<std::size_t>(std::ceil(kSubstepLength / r));
}

}  // namespace

ShootingResult shoot(const ProblemSpec& spec, std::span<const double> initial, GridPtr grid,
                     Profile which, double blow_up_ceiling) {
  const std::size_t d = spec.components();
  if (initial.size() != d) throw PreconditionError("shoot: one initial value per component is required");
  for (double v : initial) {
    if (!(v > 0.0) || !std::isfinite(v)) throw PreconditionError("shoot: initial values must be finite and > 0");
  }
  if (which == Profile::radial && !spec.is_radial()) {
    throw PreconditionError("shoot: radial profile requested for non-radial coefficients");
  }
  const int N = spec.dimension();
  const std::size_t n = grid->size();
  const RadialSystem sys(spec, which);

  std::vector<std::vector<double>> u(d, std::vector<double>(n, kNaN));
  std::vector<std::vector<double>> du(d, std::vector<double>(n, kNaN));
  for (std::size_t i = 0; i < d; ++i) {
    u[i][0] = initial[i];
    du[i][0] = 0.0;
  }

  ShootingResult out;
  out.profile = which;
  out.step_size = grid->max_spacing();
  out.valid_nodes = 1;

  std::vector<double> y(2 * d), k1(2 * d), k2(2 * d), k3(2 * d), k4(2 * d), tmp(2 * d);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double r = grid->node(k), h = grid->spacing(k);
    if (k == 0) {
      series_start(sys, N, initial, h, y);
    } else {
      const std::size_t m = substeps(r);
      const double dh = h / static_cast<double>(m);
      for (std::size_t j = 0; j < m; ++j) {
        rk4_step(sys, r + static_cast<double>(j) * dh, dh, y, k1, k2, k3, k4, tmp);
      }
    }
    const double r_next = grid->node(k + 1);
    const bool ok = std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); }) &&
                    std::all_of(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(d),
                                [blow_up_ceiling](double v) { return v <= blow_up_ceiling; });
    if (!ok) {
      out.blow_up = true;
      break;
    }
    const double lift = std::pow(r_next, N - 1.0);
    for (std::size_t i = 0; i < d; ++i) {
      u[i][k + 1] = y[i];
      du[i][k + 1] = y[d + i] / lift;
    }
    out.valid_nodes = k + 2;
  }
  for (std::size_t i = 0; i < d; ++i) {
    out.trajectory.emplace_back(grid, std::move(u[i]), out.blow_up);
    out.derivative_trace.emplace_back(grid, std::move(du[i]), out.blow_up);
  }
  return out;
}

std::vector<ClosedFormFixture> closed_form_library() {
  using V = std::vector<double>;
  std::vector<ClosedFormFixture> lib;

  // u'' + (2/r) u' = c^2 u with u(0) = beta: u = beta sinh(c r) / (c r).
  auto sinh_fixture = [](std::string name, double beta, double rate, ProblemSpec spec) {
    auto value = [beta, rate](double r) {
      const double x = rate * r;
      return V{x < 1e-4 ? beta * (1.0 + x * x / 6.0 + x * x * x * x / 120.0) : beta * std::sinh(x) / x};
    };
    auto derivative = [beta, rate](double r) {
      const double x = rate * r;
      const double dx = x < 1e-3 ? x / 3.0 + x * x * x / 30.0 + std::pow(x, 5) / 840.0
                                 : (x * std::cosh(x) - std::sinh(x)) / (x * x);
      return V{beta * rate * dx};
    };
    auto second = [beta, rate](double r) {
      const double x = rate * r;
      double d2;
      if (x < 1e-2) {
        d2 = 1.0 / 3.0 + x * x / 10.0 + std::pow(x, 4) / 168.0;
      } else {
        const double s = std::sinh(x), c = std::cosh(x);
        d2 = (x * x * s - 2.0 * x * c + 2.0 * s) / (x * x * x);
      }
      return V{beta * rate * rate * d2};
    };
    return ClosedFormFixture{std::move(name), std::move(spec), V{beta}, value, derivative, second, 20.0 / rate,
                             "u = beta sinh(c r)/(c r) solves u'' + (2/r) u' = c^2 u, u(0) = beta, u'(0) = 0"};
  };
  lib.push_back(sinh_fixture("sinh", 1.0, 1.0,
                             ProblemSpec(3, {CoefficientFamily::constant(1.0)}, {NonlinearityFamily::power(1.0)})));
  lib.push_back(sinh_fixture("sinh_scaled", 2.5, 1.0,
                             ProblemSpec(3, {CoefficientFamily::constant(1.0)}, {NonlinearityFamily::power(1.0)})));
  lib.push_back(sinh_fixture("sinh_rate2", 1.0, 2.0,
                             ProblemSpec(3, {CoefficientFamily::constant(2.0)},
                                         {NonlinearityFamily::linear_mix({2.0})})));

  {
    const V init{0.5, 2.0};
    lib.push_back(ClosedFormFixture{
        "zero_coefficients",
        ProblemSpec(4, {CoefficientFamily::constant(0.0), CoefficientFamily::constant(0.0)},
                    {NonlinearityFamily::power(1.0), NonlinearityFamily::power(2.0)}),
        init, [init](double) { return init; }, [](double) { return V{0.0, 0.0}; },
        [](double) { return V{0.0, 0.0}; }, 100.0, "p = 0 leaves u at its initial value"});
  }
  for (int N : {3, 4}) {
    const double u0 = 1.0;
    lib.push_back(ClosedFormFixture{
        "constant_forcing_N" + std::to_string(N),
        ProblemSpec(N, {CoefficientFamily::constant(1.0)}, {NonlinearityFamily::constant(1.0)}), V{u0},
        [u0, N](double r) { return V{u0 + r * r / (2.0 * N)}; },
        [N](double r) { return V{r / N}; }, [N](double) { return V{1.0 / N}; }, 100.0,
        "u = u(0) + r^2/(2N) from integrating t^{1-N} t^N / N"});
  }
  return lib;
}

CrossValidation cross_validate(const SolveOutcome& picard, const ShootingResult& shot, double threshold) {
  const IterateField& w = picard.fixed_point;
  if (w.size() != shot.trajectory.size()) throw PreconditionError("cross_validate: component counts differ");
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double a = w.components[i].values.front(), b = shot.trajectory[i].values.front();
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(b))) {
      throw PreconditionError("cross_validate: base " + format_double(a) + " differs from initial value " +
                              format_double(b));
    }
  }
  CrossValidation out;
  out.threshold = threshold;
  const RadialGrid& pg = *w.grid();
  const RadialGrid& sg = *shot.trajectory.front().grid;
  const bool same_grid = pg.size() == sg.size() && std::equal(pg.nodes().begin(), pg.nodes().end(), sg.nodes().begin());
  const double shot_limit = sg.node(shot.valid_nodes - 1);

  std::size_t compared = 0;
  bool stopped = false;
  for (std::size_t n = 0; n < pg.size() && !stopped; ++n) {
    const double r = pg.node(n);
    if (!same_grid && r > shot_limit) break;
    if (same_grid && n >= shot.valid_nodes) break;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double a = w.components[i].values[n];
      const double b = same_grid ? shot.trajectory[i].values[n] : sg.interpolate(shot.trajectory[i].values, r);
      if (!std::isfinite(a) || !std::isfinite(b)) {
        stopped = true;
        break;
      }
      const double diff = std::abs(a - b);
      out.sup_abs = std::max(out.sup_abs, diff);
      out.sup_rel = std::max(out.sup_rel, diff / std::max(std::abs(b), std::numeric_limits<double>::min()));
    }
    if (!stopped) compared = n + 1;
  }
  out.compared_nodes = compared;
  out.prefix_only = compared < pg.size() || picard.status == SolveStatus::blow_up_detected || shot.blow_up;
  out.passed = compared > 0 && out.sup_rel < threshold;
  std::ostringstream os;
  os << compared << " of " << pg.size() << " nodes compared";
  if (!same_grid) os << "; shooting trajectory interpolated onto the Picard grid";
  if (picard.status == SolveStatus::blow_up_detected) os << "; Picard iteration hit the blow-up ceiling";
  if (shot.blow_up) os << "; shooting trajectory blew up after node " << shot.valid_nodes - 1;
  out.note = os.str();
  return out;
}

}  // namespace elliptic
