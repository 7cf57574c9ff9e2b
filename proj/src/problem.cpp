#include "elliptic/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "elliptic/errors.hpp"
#include "elliptic/format.hpp"

namespace elliptic {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

void require_arity(std::string_view name, std::span<const double> params, std::size_t n) {
  if (params.size() != n) {
    std::ostringstream os;
    os << "family '" << name << "' takes " << n << " parameter(s), got " << params.size();
    throw PreconditionError(os.str());
  }
}

void require_min_arity(std::string_view name, std::span<const double> params, std::size_t n) {
  if (params.size() < n) {
    std::ostringstream os;
    os << "family '" << name << "' takes at least " << n << " parameter(s), got " << params.size();
    throw PreconditionError(os.str());
  }
}

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TailExponent TailExponent::of_sum(std::span<const TailExponent> terms) {
  TailExponent out = zero();
  for (const TailExponent& t : terms) {
    if (t.kind == Kind::polynomial) {
      if (out.kind != Kind::polynomial || t.decay < out.decay) out = t;
    } else if (t.kind == Kind::super_polynomial && out.kind == Kind::zero) {
      out = t;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CoefficientFamily

CoefficientFamily::CoefficientFamily(CoefficientKind kind, double c, double sigma,
                                     std::vector<double> axes)
    : kind_(kind), c_(c), sigma_(sigma), axes_(std::move(axes)) {
  require(finite_nonneg(c_), "coefficient scale c must be finite and >= 0");
  require(finite_nonneg(sigma_), "coefficient exponent sigma must be finite and >= 0");
  for (double a : axes_) require(finite_nonneg(a), "anisotropy weights a_i must be finite and >= 0");
  if (kind_ == CoefficientKind::anisotropic_rational) {
    require(!axes_.empty(), "anisotropic_rational needs at least one axis weight");
  }
}

CoefficientFamily CoefficientFamily::constant(double c) {
  return {CoefficientKind::constant, c, 0.0, {}};
}
CoefficientFamily CoefficientFamily::power_decay(double c, double sigma) {
  return {CoefficientKind::power_decay, c, sigma, {}};
}
CoefficientFamily CoefficientFamily::rational_decay(double c, double sigma) {
  return {CoefficientKind::rational_decay, c, sigma, {}};
}
CoefficientFamily CoefficientFamily::gaussian(double c) {
  return {CoefficientKind::gaussian, c, 0.0, {}};
}
CoefficientFamily CoefficientFamily::anisotropic_rational(double c, double sigma,
                                                          std::vector<double> axes) {
  return {CoefficientKind::anisotropic_rational, c, sigma, std::move(axes)};
}

CoefficientFamily CoefficientFamily::from_name(std::string_view name,
                                               std::span<const double> params) {
  if (name == "constant") {
    require_arity(name, params, 1);
    return constant(params[0]);
  }
  if (name == "power_decay") {
    require_arity(name, params, 2);
    return power_decay(params[0], params[1]);
  }
  if (name == "rational_decay") {
    require_arity(name, params, 2);
    return rational_decay(params[0], params[1]);
  }
  if (name == "gaussian") {
    require_arity(name, params, 1);
    return gaussian(params[0]);
  }
  if (name == "anisotropic_rational") {
    require_min_arity(name, params, 3);
    return anisotropic_rational(params[0], params[1],
                                std::vector<double>(params.begin() + 2, params.end()));
  }
  throw PreconditionError("unknown coefficient family '" + std::string(name) + "'");
}

std::vector<std::string_view> CoefficientFamily::names() {
  return {"constant", "power_decay", "rational_decay", "gaussian", "anisotropic_rational"};
}

std::string_view CoefficientFamily::name() const noexcept {
  switch (kind_) {
    case CoefficientKind::constant: return "constant";
    case CoefficientKind::power_decay: return "power_decay";
    case CoefficientKind::rational_decay: return "rational_decay";
    case CoefficientKind::gaussian: return "gaussian";
    case CoefficientKind::anisotropic_rational: return "anisotropic_rational";
  }
  return "unknown";
}

std::vector<double> CoefficientFamily::params() const {
  switch (kind_) {
    case CoefficientKind::constant:
    case CoefficientKind::gaussian: return {c_};
    case CoefficientKind::power_decay:
    case CoefficientKind::rational_decay: return {c_, sigma_};
    case CoefficientKind::anisotropic_rational: {
      std::vector<double> p{c_, sigma_};
      p.insert(p.end(), axes_.begin(), axes_.end());
      return p;
    }
  }
  return {};
}

bool CoefficientFamily::is_radial() const noexcept {
  if (kind_ != CoefficientKind::anisotropic_rational) return true;
  return std::all_of(axes_.begin(), axes_.end(), [&](double a) { return a == axes_.front(); });
}

double CoefficientFamily::operator()(std::span<const double> x) const {
  if (kind_ == CoefficientKind::anisotropic_rational) {
    if (x.size() != axes_.size()) throw PreconditionError("point dimension does not match axis weights");
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += axes_[i] * x[i] * x[i];
    return c_ * std::pow(1.0 + q, -sigma_);
  }
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  return radial(std::sqrt(r2));
}

double CoefficientFamily::radial(double r) const {
  switch (kind_) {
    case CoefficientKind::constant: return c_;
    case CoefficientKind::power_decay: return c_ * std::pow(1.0 + r, -sigma_);
    case CoefficientKind::rational_decay: return c_ * std::pow(1.0 + r * r, -sigma_);
    case CoefficientKind::gaussian: return c_ * std::exp(-r * r);
    case CoefficientKind::anisotropic_rational:
      if (!is_radial()) throw PreconditionError("anisotropic coefficient has no radial profile");
      return c_ * std::pow(1.0 + axes_.front() * r * r, -sigma_);
  }
  return 0.0;
}

double CoefficientFamily::sphere_max(double t) const {
  if (kind_ != CoefficientKind::anisotropic_rational) return radial(t);
  // Smallest weight gives the largest value: the max sits on that axis.
  const double a = *std::min_element(axes_.begin(), axes_.end());
  return c_ * std::pow(1.0 + a * t * t, -sigma_);
}

double CoefficientFamily::sphere_min(double t) const {
  if (kind_ != CoefficientKind::anisotropic_rational) return radial(t);
  const double a = *std::max_element(axes_.begin(), axes_.end());
  return c_ * std::pow(1.0 + a * t * t, -sigma_);
}

double CoefficientFamily::profile(Profile which, double t) const {
  switch (which) {
    case Profile::radial: return radial(t);
    case Profile::sphere_max: return sphere_max(t);
    case Profile::sphere_min: return sphere_min(t);
  }
  return 0.0;
}

TailExponent CoefficientFamily::tail(Profile which) const {
  if (c_ == 0.0) return TailExponent::zero();
  switch (kind_) {
    case CoefficientKind::constant: return TailExponent::polynomial(0.0);
    case CoefficientKind::power_decay: return TailExponent::polynomial(sigma_);
    case CoefficientKind::rational_decay: return TailExponent::polynomial(2.0 * sigma_);
    case CoefficientKind::gaussian: return TailExponent::super_polynomial();
    case CoefficientKind::anisotropic_rational: {
      if (which == Profile::radial && !is_radial()) {
        throw PreconditionError("anisotropic coefficient has no radial profile");
      }
      const double a = which == Profile::sphere_min
                           ? *std::max_element(axes_.begin(), axes_.end())
                           : *std::min_element(axes_.begin(), axes_.end());
      return TailExponent::polynomial(a == 0.0 ? 0.0 : 2.0 * sigma_);
    }
  }
  return TailExponent::zero();
}

double sphere_max(const CoefficientFamily& coeff, double t, int dimension) {
  if (t < 0.0) throw PreconditionError("sphere radius must be >= 0");
  if (coeff.axis_count() != 0 && coeff.axis_count() != static_cast<std::size_t>(dimension)) {
    throw PreconditionError("anisotropy weights must have one entry per dimension");
  }
  return coeff.sphere_max(t);
}

double sphere_min(const CoefficientFamily& coeff, double t, int dimension) {
  if (t < 0.0) throw PreconditionError("sphere radius must be >= 0");
  if (coeff.axis_count() != 0 && coeff.axis_count() != static_cast<std::size_t>(dimension)) {
    throw PreconditionError("anisotropy weights must have one entry per dimension");
  }
  return coeff.sphere_min(t);
}

// ---------------------------------------------------------------------------
// NonlinearityFamily

NonlinearityFamily::NonlinearityFamily(NonlinearityKind kind, std::vector<double> params)
    : kind_(kind), params_(std::move(params)) {
  switch (kind_) {
    case NonlinearityKind::power:
      require(params_.size() == 1 && std::isfinite(params_[0]) && params_[0] > 0.0,
              "power nonlinearity needs gamma > 0");
      break;
    case NonlinearityKind::linear_mix:
      require(!params_.empty(), "linear_mix needs at least one weight");
      for (double b : params_) require(finite_nonneg(b), "linear_mix weights must be >= 0");
      break;
    case NonlinearityKind::log_growth:
      require(params_.empty(), "log_growth takes no parameters");
      break;
    case NonlinearityKind::product_root:
      require(!params_.empty(), "product_root needs at least one exponent");
      for (double g : params_) require(finite_nonneg(g), "product_root exponents must be >= 0");
      require(sum_of(params_) <= 1.0 + 1e-12, "product_root exponents must sum to <= 1");
      break;
    case NonlinearityKind::constant:
      require(params_.size() == 1 && finite_nonneg(params_[0]), "constant forcing needs c >= 0");
      break;
  }
}

NonlinearityFamily NonlinearityFamily::power(double gamma) {
  return {NonlinearityKind::power, {gamma}};
}
NonlinearityFamily NonlinearityFamily::linear_mix(std::vector<double> weights) {
  return {NonlinearityKind::linear_mix, std::move(weights)};
}
NonlinearityFamily NonlinearityFamily::log_growth() { return {NonlinearityKind::log_growth, {}}; }
NonlinearityFamily NonlinearityFamily::product_root(std::vector<double> exponents) {
  return {NonlinearityKind::product_root, std::move(exponents)};
}
NonlinearityFamily NonlinearityFamily::constant(double c) {
  return {NonlinearityKind::constant, {c}};
}

NonlinearityFamily NonlinearityFamily::from_name(std::string_view name,
                                                 std::span<const double> params) {
  std::vector<double> p(params.begin(), params.end());
  if (name == "power") {
    require_arity(name, params, 1);
    return power(p[0]);
  }
  if (name == "linear_mix") {
    require_min_arity(name, params, 1);
    return linear_mix(std::move(p));
  }
  if (name == "log_growth") {
    require_arity(name, params, 0);
    return log_growth();
  }
  if (name == "product_root") {
    require_min_arity(name, params, 1);
    return product_root(std::move(p));
  }
  if (name == "constant") {
    require_arity(name, params, 1);
    return constant(p[0]);
  }
  throw PreconditionError("unknown nonlinearity family '" + std::string(name) + "'");
}

std::vector<std::string_view> NonlinearityFamily::names() {
  return {"power", "linear_mix", "log_growth", "product_root", "constant"};
}

std::string_view NonlinearityFamily::name() const noexcept {
  switch (kind_) {
    case NonlinearityKind::power: return "power";
    case NonlinearityKind::linear_mix: return "linear_mix";
    case NonlinearityKind::log_growth: return "log_growth";
    case NonlinearityKind::product_root: return "product_root";
    case NonlinearityKind::constant: return "constant";
  }
  return "unknown";
}

std::size_t NonlinearityFamily::required_arity() const noexcept {
  return (kind_ == NonlinearityKind::linear_mix || kind_ == NonlinearityKind::product_root)
             ? params_.size()
             : 0;
}

double NonlinearityFamily::operator()(std::span<const double> s) const {
  switch (kind_) {
    case NonlinearityKind::power: return std::pow(sum_of(s), params_[0]);
    case NonlinearityKind::linear_mix: {
      double acc = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) acc += params_[i] * s[i];
      return acc;
    }
    case NonlinearityKind::log_growth: {
      const double total = sum_of(s);
      return total * std::log1p(total);
    }
    case NonlinearityKind::product_root: {
      double acc = 1.0;
      for (std::size_t i = 0; i < s.size(); ++i) acc *= std::pow(s[i], params_[i]);
      return acc;
    }
    case NonlinearityKind::constant: return params_[0];
  }
  return 0.0;
}

double NonlinearityFamily::diagonal(double t, std::size_t d) const {
  const double dd = static_cast<double>(d);
  switch (kind_) {
    case NonlinearityKind::power: return std::pow(dd * t, params_[0]);
    case NonlinearityKind::linear_mix: return sum_of(params_) * t;
    case NonlinearityKind::log_growth: return dd * t * std::log1p(dd * t);
    case NonlinearityKind::product_root: return std::pow(t, sum_of(params_));
    case NonlinearityKind::constant: return params_[0];
  }
  return 0.0;
}

std::optional<double> NonlinearityFamily::diagonal_integral(double s, std::size_t d) const {
  const double dd = static_cast<double>(d);
  switch (kind_) {
    case NonlinearityKind::power: {
      const double g = params_[0];
      return std::pow(dd, g) * std::pow(s, g + 1.0) / (g + 1.0);
    }
    case NonlinearityKind::linear_mix: return 0.5 * sum_of(params_) * s * s;
    case NonlinearityKind::log_growth: return std::nullopt;
    case NonlinearityKind::product_root: {
      const double g = sum_of(params_);
      return std::pow(s, g + 1.0) / (g + 1.0);
    }
    case NonlinearityKind::constant: return params_[0] * s;
  }
  return std::nullopt;
}

std::optional<double> NonlinearityFamily::growth_exponent() const {
  switch (kind_) {
    case NonlinearityKind::power: return params_[0];
    case NonlinearityKind::linear_mix: return 1.0;
    case NonlinearityKind::log_growth: return std::nullopt;
    case NonlinearityKind::product_root: return sum_of(params_);
    case NonlinearityKind::constant: return 0.0;
  }
  return std::nullopt;
}

namespace {

bool identically_zero(const NonlinearityFamily& f) {
  switch (f.kind()) {
    case NonlinearityKind::linear_mix: return sum_of(f.params()) == 0.0;
    case NonlinearityKind::constant: return f.params()[0] == 0.0;
    default: return false;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ProblemSpec

ProblemSpec::ProblemSpec(int dimension, std::vector<CoefficientFamily> coefficients,
                         std::vector<NonlinearityFamily> nonlinearities, double epsilon)
    : dimension_(dimension),
      coefficients_(std::move(coefficients)),
      nonlinearities_(std::move(nonlinearities)),
      epsilon_(epsilon) {
  require(dimension_ >= 3, "dimension N must be >= 3");
  require(!coefficients_.empty(), "at least one component is required");
  require(coefficients_.size() == nonlinearities_.size(),
          "coefficient and nonlinearity lists must both have length d");
  require(std::isfinite(epsilon_) && epsilon_ > 0.0, "epsilon must be > 0");
  const std::size_t d = coefficients_.size();
  for (const CoefficientFamily& p : coefficients_) {
    require(p.axis_count() == 0 || p.axis_count() == static_cast<std::size_t>(dimension_),
            "anisotropy weights must have one entry per dimension");
  }
  for (const NonlinearityFamily& f : nonlinearities_) {
    require(f.required_arity() == 0 || f.required_arity() == d,
            "nonlinearity '" + std::string(f.name()) + "' must have one parameter per component");
  }
}

bool ProblemSpec::is_radial() const noexcept {
  return std::all_of(coefficients_.begin(), coefficients_.end(),
                     [](const CoefficientFamily& p) { return p.is_radial(); });
}

ProblemSpec ProblemSpec::with_epsilon(double epsilon) const {
  return ProblemSpec(dimension_, coefficients_, nonlinearities_, epsilon);
}

ProblemSpec ProblemSpec::scaled(double lambda) const {
  require(std::isfinite(lambda) && lambda > 0.0, "scale factor must be > 0");
  std::vector<CoefficientFamily> scaled;
  for (const CoefficientFamily& p : coefficients_) {
    std::vector<double> params = p.params();
    params[0] *= lambda;
    scaled.push_back(CoefficientFamily::from_name(p.name(), params));
  }
  return ProblemSpec(dimension_, std::move(scaled), nonlinearities_, epsilon_);
}

double ProblemSpec::coefficient_sum(Profile which, double t) const {
  double acc = 0.0;
  for (const CoefficientFamily& p : coefficients_) acc += p.profile(which, t);
  return acc;
}

TailExponent ProblemSpec::coefficient_sum_tail(Profile which) const {
  std::vector<TailExponent> tails;
  for (const CoefficientFamily& p : coefficients_) tails.push_back(p.tail(which));
  return TailExponent::of_sum(tails);
}

// ---------------------------------------------------------------------------
// BigF

BigF::BigF(std::vector<NonlinearityFamily> underlying, std::size_t d)
    : underlying_(std::move(underlying)), d_(d) {
  require(d_ >= 1 && underlying_.size() == d_, "F needs exactly d nonlinearities");
}

BigF::BigF(const ProblemSpec& spec) : BigF(spec.nonlinearities(), spec.components()) {}

double BigF::diagonal_sum(double t) const {
  double acc = 0.0;
  for (const NonlinearityFamily& f : underlying_) acc += f.diagonal(t, d_);
  return acc;
}

bool BigF::has_closed_form() const {
  return std::all_of(underlying_.begin(), underlying_.end(), [&](const NonlinearityFamily& f) {
    return f.diagonal_integral(1.0, d_).has_value();
  });
}

double BigF::operator()(double s) const {
  if (s < 0.0) throw PreconditionError("F is defined for s >= 0");
  if (s == 0.0) return 0.0;
  if (has_closed_form()) {
    double acc = 0.0;
    for (const NonlinearityFamily& f : underlying_) acc += *f.diagonal_integral(s, d_);
    return acc;
  }
  return romberg([this](double t) { return diagonal_sum(t); }, 0.0, s);
}

double BigF::integral(double a, double b) const {
  if (has_closed_form()) return (*this)(b) - (*this)(a);
  return romberg([this](double t) { return diagonal_sum(t); }, a, b);
}

std::optional<double> BigF::growth_exponent() const {
  std::optional<double> best;
  for (const NonlinearityFamily& f : underlying_) {
    if (identically_zero(f)) continue;
    const auto g = f.growth_exponent();
    if (!g) return std::nullopt;
    if (!best || *g > *best) best = g;
  }
  return best;
}

bool BigF::is_zero() const {
  return std::all_of(underlying_.begin(), underlying_.end(), identically_zero);
}

double big_f_eval(const BigF& f, double s) { return f(s); }

// ---------------------------------------------------------------------------
// Hypothesis audit

std::string_view to_string(AuditVerdict v) {
  switch (v) {
    case AuditVerdict::pass: return "pass";
    case AuditVerdict::fail: return "fail";
    case AuditVerdict::flagged: return "flagged";
  }
  return "unknown";
}

std::size_t audit_lattice_points_per_axis(std::size_t d) {
  constexpr double kCap = 1e5;
  std::size_t m = 21;
  while (m > 2 && std::pow(static_cast<double>(m), static_cast<double>(d)) > kCap) --m;
  return m;
}

namespace {

constexpr double kLatticeMax = 10.0;
constexpr double kMonotoneTolerance = -1e-12;

// Lattice point number `index` of an m^d lattice on [0, 10]^d.
void lattice_point(std::size_t index, std::size_t m, std::span<double> out) {
  const double step = kLatticeMax / static_cast<double>(m - 1);
  for (double& x : out) {
    x = step * static_cast<double>(index % m);
    index /= m;
  }
}

HypothesisCheck audit_coefficients_nonnegative(const ProblemSpec& spec) {
  const auto n = static_cast<std::size_t>(spec.dimension());
  std::vector<std::vector<double>> directions;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    directions.push_back(e);
    e[i] = -1.0;
    directions.push_back(e);
  }
  directions.emplace_back(n, 1.0 / std::sqrt(static_cast<double>(n)));
  // A few deterministic oblique directions.
  for (std::size_t k = 1; k <= 8; ++k) {
    std::vector<double> v(n);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = std::sin(static_cast<double>((k + 1) * (i + 1)) * 1.2345);
      norm += v[i] * v[i];
    }
    for (double& x : v) x /= std::sqrt(norm);
    directions.push_back(v);
  }
  const double radii[] = {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1000.0};

  std::size_t samples = 0, bad = 0;
  std::vector<double> x(n);
  for (const CoefficientFamily& p : spec.coefficients()) {
    for (const auto& dir : directions) {
      for (double r : radii) {
        for (std::size_t i = 0; i < n; ++i) x[i] = r * dir[i];
        const double v = p(x);
        ++samples;
        if (!finite_nonneg(v)) ++bad;
      }
    }
  }
  std::ostringstream os;
  os << samples << " samples, " << bad << " negative or non-finite; Hoelder continuity holds for "
     << "every built-in family by construction";
  return {"coefficients_nonnegative", bad == 0 ? AuditVerdict::pass : AuditVerdict::fail, os.str(), false};
}

HypothesisCheck audit_f_zero_positive(const ProblemSpec& spec) {
  const std::size_t d = spec.components();
  const std::size_t m = audit_lattice_points_per_axis(d);
  const auto total = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(m), static_cast<double>(d))));
  std::ostringstream os;
  bool zero_ok = true;
  std::size_t nonpositive = 0;
  bool flagged = false;
  std::vector<double> zero(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const NonlinearityFamily& f = spec.nonlinearity(i);
    if (f(zero) != 0.0) zero_ok = false;
    if (!f.c1_strict()) flagged = true;
  }
  long long bad = 0;
#pragma omp parallel for reduction(+ : bad) schedule(static)
  for (long long idx = 1; idx < static_cast<long long>(total); ++idx) {
    std::vector<double> s(d);
    lattice_point(static_cast<std::size_t>(idx), m, s);
    for (std::size_t i = 0; i < d; ++i) {
      if (!(spec.nonlinearity(i)(s) > 0.0)) ++bad;
    }
  }
  nonpositive = static_cast<std::size_t>(bad);
  os << "f(0)=0: " << (zero_ok ? "yes" : "no") << "; " << nonpositive
     << " nonpositive values at nonzero lattice points (" << m << "^" << d << " lattice on [0,10]^d)";
  if (flagged) os << "; product_root family present (c1_strict = false)";
  AuditVerdict verdict = AuditVerdict::pass;
  if (flagged) {
    verdict = AuditVerdict::flagged;
  } else if (!zero_ok || nonpositive > 0) {
    verdict = AuditVerdict::fail;
  }
  return {"f_zero_positive", verdict, os.str(), false};
}

HypothesisCheck audit_f_monotone(const ProblemSpec& spec) {
  const std::size_t d = spec.components();
  const std::size_t m = audit_lattice_points_per_axis(d);
  const auto total = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(m), static_cast<double>(d))));
  const double step = kLatticeMax / static_cast<double>(m - 1);
  long long decreasing = 0, flat = 0, pairs = 0;
  double worst = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(+ : decreasing, flat, pairs) reduction(min : worst) schedule(static)
  for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
    std::vector<double> s(d), t(d);
    lattice_point(static_cast<std::size_t>(idx), m, s);
    for (std::size_t axis = 0; axis < d; ++axis) {
      if (s[axis] + 0.5 * step > kLatticeMax) continue;
      t = s;
      t[axis] += step;
      for (std::size_t i = 0; i < d; ++i) {
        const NonlinearityFamily& f = spec.nonlinearity(i);
        const double lo = f(s), hi = f(t);
        const double diff = hi - lo;
        const double scaled = diff / std::max(1.0, std::abs(lo));
        ++pairs;
        worst = std::min(worst, scaled);
        if (scaled < kMonotoneTolerance) ++decreasing;
        if (!(diff > 0.0)) ++flat;
      }
    }
  }
  std::ostringstream os;
  os << pairs << " forward differences on a " << m << "^" << d << " lattice over [0,10]^d; "
     << decreasing << " below -1e-12, " << flat << " non-positive; smallest scaled difference "
     << format_double(worst) << "; strictly increasing: "
     << (flat == 0 ? "yes" : "no");
  return {"f_monotone", decreasing == 0 ? AuditVerdict::pass : AuditVerdict::fail, os.str(), flat == 0};
}

}  // namespace

std::vector<HypothesisCheck> hypothesis_audit(const ProblemSpec& spec) {
  return {audit_coefficients_nonnegative(spec), audit_f_zero_positive(spec), audit_f_monotone(spec)};
}

bool audit_passes(std::span<const HypothesisCheck> checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.verdict == AuditVerdict::pass; });
}

}  // namespace elliptic
