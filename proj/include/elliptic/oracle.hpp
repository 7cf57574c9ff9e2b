#pragma once

// Independent check of the Picard fixed points: direct integration of the
// radial ODE system
//
//   (r^{N-1} u_i')' = r^{N-1} c_i(r) f_i(u_1, ..., u_d),  u_i(0) given, u_i'(0) = 0,
//
// as the first-order system (u_i, m_i = r^{N-1} u_i') with classical RK4 on
// the grid intervals, plus a registry of closed-form reference solutions.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "elliptic/problem.hpp"
#include "elliptic/radial.hpp"
#include "elliptic/solver.hpp"

namespace elliptic {

struct ShootingResult {
  std::vector<RadialFunction> trajectory;
  std::vector<RadialFunction> derivative_trace;
  /// Largest grid spacing used as a step.
  double step_size = 0.0;
  int method_order = 4;
  Profile profile = Profile::radial;
  /// Some value became non-finite or exceeded the ceiling; nodes from
  /// valid_nodes on hold NaN.
  bool blow_up = false;
  std::size_t valid_nodes = 0;
};

/// c_i is the chosen profile of p_i (radial data for Profile::radial; the
/// sphere max or min reproduces the lower or upper envelope problem).
/// The first interval [0, h] uses the series u_i ~ u_i(0) + c_i(0) f_i(u(0)) r^2 / (2N)
/// inside nested Gauss-Legendre quadrature of the integral form, which keeps
/// the start at fourth order or better.
ShootingResult shoot(const ProblemSpec& spec, std::span<const double> initial, GridPtr grid,
                     Profile which = Profile::radial, double blow_up_ceiling = 1e12);

struct ClosedFormFixture {
  std::string name;
  ProblemSpec spec;
  std::vector<double> initial;
  /// Exact u_i(r), u_i'(r), u_i''(r).
  std::function<std::vector<double>(double)> value, derivative, second_derivative;
  /// The formulas are used on [0, r_max].
  double r_max = 0.0;
  std::string provenance;
};

/// At least: beta sinh(r)/r, zero coefficients (constants), constant forcing
/// u(0) + r^2/(2N) for N = 3 and 4, and the rate-2 sinh used for scalar
/// majorants.
std::vector<ClosedFormFixture> closed_form_library();

inline constexpr double kOracleThreshold = 1e-4;

struct CrossValidation {
  /// Max over components and compared nodes of |picard - shot| and of
  /// |picard - shot| / |shot|.
  double sup_abs = 0.0;
  double sup_rel = 0.0;
  std::size_t compared_nodes = 0;
  /// Only a finite common prefix of the grid was compared.
  bool prefix_only = false;
  double threshold = kOracleThreshold;
  bool passed = false;
  std::string note;
};

/// Requires equal component counts and equal values at r = 0 (the base of the
/// solve equals the shooting initial value); otherwise PreconditionError.
CrossValidation cross_validate(const SolveOutcome& picard, const ShootingResult& shot,
                               double threshold = kOracleThreshold);

}  // namespace elliptic
