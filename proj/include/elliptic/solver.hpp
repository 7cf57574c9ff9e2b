#pragma once

// Monotone successive approximation for the radial integral equations
//
//   w_i^{k+1}(r) = base + G[c_i f_i(w_1^k, ..., w_d^k)](r),   w_i^0 = base,
//
// with c_i a sampled radial profile of p_i (sphere max for the lower
// envelope, sphere min for the upper envelope, p_i itself for radial data).
// Because G has nonnegative weights and f_i is nondecreasing, the iterates are
// nondecreasing in k and in r and never drop below base; every step is
// checked for exactly that.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "elliptic/kernels.hpp"
#include "elliptic/problem.hpp"
#include "elliptic/radial.hpp"

namespace elliptic {

/// One iterate: d sampled components plus their radial derivatives.
struct IterateField {
  std::size_t k = 0;
  double base = 0.0;
  std::vector<RadialFunction> components;
  /// derivatives[i][n] = (w_i)'(r_n), exact for the discrete iterate.
  Field derivatives;
  /// Some value exceeded the blow-up ceiling or stopped being finite.
  bool blow_up = false;

  static IterateField constant(GridPtr grid, std::size_t d, double base);

  std::size_t size() const noexcept { return components.size(); }
  const GridPtr& grid() const { return components.front().grid; }
  /// sum_i w_i at one node.
  double sum_at(std::size_t node) const;
  std::vector<double> sum() const;
  std::vector<double> sum_derivative() const;
  /// Largest absolute value over all components and nodes.
  double sup() const;
};

/// Violations of the per-step invariants, counted node by node.
struct StepInvariants {
  std::size_t monotone_in_k = 0;  // next < prev - 1e-12
  std::size_t floor = 0;          // next < base
  std::size_t monotone_in_r = 0;  // next decreases between neighbouring nodes
  std::size_t steps = 0;

  std::size_t total() const noexcept { return monotone_in_k + floor + monotone_in_r; }
  StepInvariants& operator+=(const StepInvariants& other);
};

inline constexpr double kMonotoneSlack = 1e-12;

StepInvariants check_step(const IterateField& prev, const IterateField& next);

/// c_i sampled on the grid with the requested profile.
Field sample_coefficients(const ProblemSpec& spec, const RadialGrid& grid, Profile which);

enum class Kernel { serial, parallel };

/// next_i = base + G[coeff_i f_i(prev)]. A non-finite forcing marks the
/// result as blow-up instead of throwing.
IterateField picard_step(const IterateField& prev, const Field& coeffs, const ProblemSpec& spec,
                         const GreenOperator& green, Kernel kernel = Kernel::parallel);

enum class SolveStatus { converged, blow_up_detected, max_iterations };
std::string_view to_string(SolveStatus s);

struct SolveOptions {
  /// <= 0 selects the default 1e-10 (1 + base).
  double tol = 0.0;
  std::size_t max_iter = 10000;
  double blow_up_ceiling = 1e12;
  /// Replaces the default base (1/d for the lower envelope).
  std::optional<double> base_override;
  /// Keep every iterate (needed by audit_proof_bounds).
  bool keep_trace = false;
  Kernel kernel = Kernel::parallel;
};

double resolved_tolerance(const SolveOptions& opts, double base);

struct SolveOutcome {
  SolveStatus status = SolveStatus::max_iterations;
  /// Last iterate (the fixed point when converged).
  IterateField fixed_point;
  std::size_t iterations = 0;
  /// sup_n max_i |w_i^{k+1} - w_i^k| for every step taken.
  std::vector<double> sup_deltas;
  /// d(sum_i w_i)/dr at R_max.
  double tail_slope = 0.0;
  /// Resolved tolerance; convergence means delta < tol * max(1, sup |w|).
  double tol = 0.0;
  /// sup |w - base - G[c f(w)]| on convergence, NaN otherwise.
  double residual = std::numeric_limits<double>::quiet_NaN();
  StepInvariants violations;
  /// Iterates 0..iterations when SolveOptions::keep_trace is set.
  std::vector<IterateField> trace;

  bool converged() const noexcept { return status == SolveStatus::converged; }
  /// sum_i w_i(R_max)
  double sum_at_rmax() const;
};

/// Lower envelope: coefficients are sphere maxima, base 1/d unless overridden.
SolveOutcome solve_lower(const ProblemSpec& spec, GridPtr grid, const SolveOptions& opts = {});

struct UpperSolve {
  SolveOutcome outcome;
  double M = 0.0;
  /// min over components and nodes of v_i - w_i.
  double sandwich_margin = 0.0;
  /// d(sum_i w_i)/dr at R_max of the lower solve; a large value means the
  /// truncated M is still far from the limit.
  double lower_tail_slope = 0.0;
};

/// Default M: sum_i w_i(R_max) of the lower solve.
double upper_base(const SolveOutcome& lower);

/// Upper envelope: sphere minima, base M >= sup sum_i w_i (PreconditionError
/// otherwise). The lower solve must live on the same grid.
UpperSolve solve_upper(const ProblemSpec& spec, const SolveOutcome& lower, double M,
                       const SolveOptions& opts = {});

/// Scalar majorant z = z0 + G[(sum_i p_i)(sum_i f_i(z, ..., z))]; radial
/// data only.
SolveOutcome solve_majorant(const ProblemSpec& spec, GridPtr grid, double z0,
                            const SolveOptions& opts = {});

struct DominationReport {
  std::size_t iterates_checked = 0;
  std::size_t violations = 0;
  /// min over iterates, components and nodes of z + slack - u_j^k.
  double worst_margin = std::numeric_limits<double>::infinity();
  struct Violation {
    std::size_t k, component, node;
    double excess;
  };
  std::optional<Violation> first;

  bool dominated() const noexcept { return violations == 0; }
};

struct DominatedSolve {
  SolveOutcome outcome;
  DominationReport domination;
};

/// Component iteration from base beta1 with coefficients p_j, checking every
/// iterate against the majorant: u_j^k <= z + 10 tol. Requires radial data,
/// 0 < beta1 <= z(0) and a majorant on the same grid.
DominatedSolve solve_dominated(const ProblemSpec& spec, double beta1, const SolveOutcome& majorant,
                               const SolveOptions& opts = {});

enum class LargenessTrend { large_trend, bounded_trend, inconclusive };
std::string_view to_string(LargenessTrend t);

inline constexpr double kLargenessRadii[] = {10.0, 30.0, 100.0};
inline constexpr double kSaturationThreshold = 1e-3;

struct LargenessReport {
  LargenessTrend trend = LargenessTrend::inconclusive;
  std::vector<double> radii;
  /// sum_i u_i at each radius (NaN when the solve stopped at the ceiling).
  std::vector<double> sums;
  /// (s_100 - s_30) / s_100
  double last_relative_increment = std::numeric_limits<double>::quiet_NaN();
  bool blow_up = false;
  /// Lower bound sum_i [u_i(R) + f_i(u(R)) int_R^r t^{1-N} int_R^t s^{N-1} p_i]
  /// at R = 10, r = 100 and whether the computed solution respects it.
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
  bool lower_bound_holds = true;
  std::string note;
};

/// Samples sum_i u_i at r = 10, 30, 100. The integral equation is of Volterra
/// type, so truncating at a smaller R_max does not change values below it and
/// one solve on [0, 100] serves all three truncations; the outcome is re-solved
/// on a uniform [0, 100] grid when its own grid is shorter.
LargenessReport detect_largeness(const SolveOutcome& outcome, const ProblemSpec& spec,
                                 const SolveOptions& opts = {});

struct BoundCertificate {
  enum class Status { holds, violated, not_applicable };
  Status status = Status::not_applicable;
  double R = 0.0;
  /// [R^{N-1} (sum_i w_i)'(R)]^2 of the iterate with the worst integrated slack.
  double C = 0.0;
  /// Both sides of the integrated bound at R_max for that iterate.
  double lhs_integrated = 0.0, rhs_integrated = 0.0;
  /// max_j max_{0 <= r <= R} phi_j(r)
  double phi_R_max = 0.0;
  /// Worst relative slack (rhs - lhs) / |rhs| of each inequality.
  double slack_gradient = std::numeric_limits<double>::infinity();
  double slack_flux = std::numeric_limits<double>::infinity();
  double slack_integrated = std::numeric_limits<double>::infinity();
  std::size_t iterates_audited = 0;
  std::size_t violations = 0;
  /// The gradient bound used min(1, sum_i w_i(0)) as lower limit
  /// because sum_i w_i(0) < 1.
  bool lower_limit_modified = false;
  std::string note;

  bool holds() const noexcept { return status == Status::holds; }
};

inline constexpr double kAuditSlack = 1e-8;

/// Audits three a-priori estimates on each iterate of a lower-envelope trace,
/// with S = sum_i w_i^k, g(s) = sum_i f_i(s, ..., s), F(s) = int_0^s g and
/// phi_i^R the max of phi_i on [0, R]:
///   gradient    S'(r)^2 <= 2 (sum_i phi_i^R) int_{min(1,S(0))}^{S(r)} g    on [0, R]
///   flux        S'(r) <= sqrt(C) r^{1-N} + sqrt(2 sum_i phi_i(r) F(S(r)))   on [R, R_max]
///   integrated  int_{S(R)}^{S(R_max)} F^{-1/2}
///                 <= sqrt(C) F(S(R))^{-1/2} int_R^{R_max} t^{1-N} dt
///                    + int_R^{R_max} t^{1+eps} sum_i phi_i + 1 / (eps R^eps)
/// Not applicable when r^{2N-2} sum_i phi_i is not nondecreasing from R on.
BoundCertificate audit_proof_bounds(const std::vector<IterateField>& trace, const ProblemSpec& spec,
                                    double R);

}  // namespace elliptic
