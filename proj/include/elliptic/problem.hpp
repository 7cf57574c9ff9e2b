#pragma once

// Problem data for the system  Delta u_i = p_i(x) f_i(u_1, ..., u_d)  on R^N.
// Coefficients and nonlinearities are parameterized families addressed by a
// stable name and a flat parameter list; this keeps sphere extremization and
// tail exponents exact.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elliptic {

/// Leading-order tail of a nonnegative function: value ~ C t^{-decay}.
struct TailExponent {
  enum class Kind { zero, polynomial, super_polynomial };
  Kind kind = Kind::zero;
  double decay = 0.0;  // only meaningful for Kind::polynomial

  static TailExponent zero() { return {Kind::zero, 0.0}; }
  static TailExponent polynomial(double decay) { return {Kind::polynomial, decay}; }
  static TailExponent super_polynomial() { return {Kind::super_polynomial, 0.0}; }

  /// Tail of a sum: the slowest-decaying term wins.
  static TailExponent of_sum(std::span<const TailExponent> terms);
};

enum class CoefficientKind { constant, power_decay, rational_decay, gaussian, anisotropic_rational };

/// Which radial profile of a coefficient is used: the radial value itself or
/// the max / min over the sphere |x| = t.
enum class Profile { radial, sphere_max, sphere_min };

class CoefficientFamily {
 public:
  static CoefficientFamily constant(double c);
  /// c (1 + r)^{-sigma}
  static CoefficientFamily power_decay(double c, double sigma);
  /// c (1 + r^2)^{-sigma}
  static CoefficientFamily rational_decay(double c, double sigma);
  /// c exp(-r^2)
  static CoefficientFamily gaussian(double c);
  /// c (1 + sum_i a_i x_i^2)^{-sigma}
  static CoefficientFamily anisotropic_rational(double c, double sigma, std::vector<double> axes);

  /// Registry lookup by stable name; throws PreconditionError on an unknown
  /// name or a wrong parameter count.
  static CoefficientFamily from_name(std::string_view name, std::span<const double> params);
  static std::vector<std::string_view> names();

  CoefficientKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;
  /// Parameters in registry order (c, sigma, a_1..a_N as applicable).
  std::vector<double> params() const;

  bool is_radial() const noexcept;
  /// Number of spatial axes the family is tied to (0 for radial-only families).
  std::size_t axis_count() const noexcept { return axes_.size(); }

  double operator()(std::span<const double> x) const;
  /// Radial value p(r); for anisotropic families requires is_radial().
  double radial(double r) const;
  double sphere_max(double t) const;
  double sphere_min(double t) const;
  double profile(Profile which, double t) const;

  TailExponent tail(Profile which) const;

 private:
  CoefficientFamily(CoefficientKind kind, double c, double sigma, std::vector<double> axes);

  CoefficientKind kind_;
  double c_;
  double sigma_;
  std::vector<double> axes_;
};

double sphere_max(const CoefficientFamily& coeff, double t, int dimension);
double sphere_min(const CoefficientFamily& coeff, double t, int dimension);

enum class NonlinearityKind { power, linear_mix, log_growth, product_root, constant };

class NonlinearityFamily {
 public:
  /// (sum_i s_i)^gamma, gamma > 0
  static NonlinearityFamily power(double gamma);
  /// sum_i b_i s_i, b >= 0
  static NonlinearityFamily linear_mix(std::vector<double> weights);
  /// S log(1 + S), S = sum_i s_i
  static NonlinearityFamily log_growth();
  /// prod_i s_i^{gamma_i}, gamma_i >= 0, sum gamma_i <= 1
  static NonlinearityFamily product_root(std::vector<double> exponents);
  /// f == c. Violates f(0) = 0; only meaningful as oracle forcing.
  static NonlinearityFamily constant(double c);

  static NonlinearityFamily from_name(std::string_view name, std::span<const double> params);
  static std::vector<std::string_view> names();

  NonlinearityKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;
  std::vector<double> params() const { return params_; }

  double operator()(std::span<const double> s) const;
  /// f(t, ..., t) with d arguments.
  double diagonal(double t, std::size_t d) const;
  /// Antiderivative of the diagonal, int_0^s f(t, ..., t) dt, when it has a
  /// closed form.
  std::optional<double> diagonal_integral(double s, std::size_t d) const;
  /// f(t, ..., t) ~ C t^gamma; nullopt for logarithmically corrected growth.
  std::optional<double> growth_exponent() const;

  /// False for families that break "f > 0 once some s_i > 0".
  bool c1_strict() const noexcept { return kind_ != NonlinearityKind::product_root; }
  bool oracle_only() const noexcept { return kind_ == NonlinearityKind::constant; }
  /// Required argument count, or 0 when any d is accepted.
  std::size_t required_arity() const noexcept;

 private:
  NonlinearityFamily(NonlinearityKind kind, std::vector<double> params);

  NonlinearityKind kind_;
  std::vector<double> params_;
};

class ProblemSpec {
 public:
  ProblemSpec(int dimension, std::vector<CoefficientFamily> coefficients,
              std::vector<NonlinearityFamily> nonlinearities, double epsilon = 0.5);

  int dimension() const noexcept { return dimension_; }
  std::size_t components() const noexcept { return coefficients_.size(); }
  double epsilon() const noexcept { return epsilon_; }
  const std::vector<CoefficientFamily>& coefficients() const noexcept { return coefficients_; }
  const std::vector<NonlinearityFamily>& nonlinearities() const noexcept { return nonlinearities_; }
  const CoefficientFamily& coefficient(std::size_t j) const { return coefficients_.at(j); }
  const NonlinearityFamily& nonlinearity(std::size_t i) const { return nonlinearities_.at(i); }

  bool is_radial() const noexcept;

  ProblemSpec with_epsilon(double epsilon) const;
  /// Multiplies every coefficient by lambda > 0.
  ProblemSpec scaled(double lambda) const;

  /// sum_j profile_j(t)
  double coefficient_sum(Profile which, double t) const;
  TailExponent coefficient_sum_tail(Profile which) const;

 private:
  int dimension_;
  std::vector<CoefficientFamily> coefficients_;
  std::vector<NonlinearityFamily> nonlinearities_;
  double epsilon_;
};

/// F(s) = int_0^s sum_i f_i(t, ..., t) dt.
class BigF {
 public:
  BigF(std::vector<NonlinearityFamily> underlying, std::size_t d);
  explicit BigF(const ProblemSpec& spec);

  std::size_t components() const noexcept { return d_; }
  const std::vector<NonlinearityFamily>& underlying() const noexcept { return underlying_; }

  /// sum_i f_i(t, ..., t)
  double diagonal_sum(double t) const;
  double operator()(double s) const;
  /// int_a^b sum_i f_i(t, ..., t) dt
  double integral(double a, double b) const;
  bool has_closed_form() const;
  /// Largest growth exponent of the diagonal sum; nullopt if any term carries
  /// a logarithmic correction.
  std::optional<double> growth_exponent() const;
  /// Diagonal sum vanishes identically.
  bool is_zero() const;

 private:
  std::vector<NonlinearityFamily> underlying_;
  std::size_t d_;
};

double big_f_eval(const BigF& f, double s);

/// Romberg integration (trapezoid refinement with Richardson extrapolation).
template <typename Fn>
double romberg(Fn&& fn, double a, double b, double rel_tol = 1e-13, int max_levels = 22);

enum class AuditVerdict { pass, fail, flagged };

std::string_view to_string(AuditVerdict v);

struct HypothesisCheck {
  /// "coefficients_nonnegative", "f_zero_positive" or "f_monotone".
  std::string id;
  AuditVerdict verdict = AuditVerdict::pass;
  std::string evidence;
  /// f_monotone only: every sampled difference was strictly positive.
  bool strict = false;
};

/// Points per axis of the monotonicity lattice on [0, 10]^d.
std::size_t audit_lattice_points_per_axis(std::size_t d);

std::vector<HypothesisCheck> hypothesis_audit(const ProblemSpec& spec);

/// True when every check passes (flagged counts as not passing).
bool audit_passes(std::span<const HypothesisCheck> checks);

}  // namespace elliptic

#include "elliptic/detail/romberg.hpp"
