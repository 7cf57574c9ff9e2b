#pragma once

// Radial discretization: grids on [0, R_max], sampled radial functions and
// the radial Green operator
//
//   G[g](r) = int_0^r t^{1-N} int_0^t s^{N-1} g(s) ds dt,
//
// which inverts the radial Laplacian (r^{N-1} w')' / r^{N-1} with w(0) = 0,
// w'(0) = 0. Every integral equation handled by the solver is of the form
// w = base + G[p f(w)].

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace elliptic {

enum class Spacing { uniform, graded };

class RadialGrid {
 public:
  static constexpr std::size_t kMinNodes = 16;
  static constexpr double kMaxGradedRatio = 1.05;

  /// Equispaced nodes 0 = r_0 < ... < r_{n-1} = r_max.
  static RadialGrid uniform(double r_max, std::size_t n_nodes);

  /// Geometric spacing, finest at the origin. ratio == 0 picks
  /// min(1.05, 100^{1/(n-2)}), i.e. a last/first spacing ratio of at most 100.
  static RadialGrid graded(double r_max, std::size_t n_nodes, double ratio = 0.0);

  static RadialGrid make(double r_max, std::size_t n_nodes, Spacing policy);

  /// Validates: r_0 == 0, strictly increasing, at least kMinNodes nodes.
  RadialGrid(std::vector<double> nodes, Spacing policy);

  std::span<const double> nodes() const noexcept { return nodes_; }
  double node(std::size_t i) const noexcept { return nodes_[i]; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t intervals() const noexcept { return nodes_.size() - 1; }
  double r_max() const noexcept { return nodes_.back(); }
  double spacing(std::size_t interval) const noexcept {
    return nodes_[interval + 1] - nodes_[interval];
  }
  double max_spacing() const noexcept;
  Spacing spacing_policy() const noexcept { return policy_; }

  /// Per-interval trapezoid weights (h_i / 2 for each endpoint).
  std::span<const double> quad_weights() const noexcept { return quad_weights_; }

  /// Index i of the interval [r_i, r_{i+1}] containing r (clamped to the grid).
  std::size_t locate(double r) const;

  /// Piecewise-linear interpolation of node samples.
  double interpolate(std::span<const double> values, double r) const;

  /// Index of the node closest to r.
  std::size_t nearest_node(double r) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> quad_weights_;
  Spacing policy_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Samples of a scalar radial quantity, one per grid node.
struct RadialFunction {
  GridPtr grid;
  std::vector<double> values;
  /// Set for trajectories that overflowed; non-finite samples are then allowed.
  bool blow_up_trace = false;

  RadialFunction() = default;
  RadialFunction(GridPtr g, std::vector<double> v, bool blow_up = false);

  /// Samples fn(r) on every node of the grid.
  template <typename Fn>
  static RadialFunction sample(GridPtr g, Fn&& fn) {
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(g->node(i));
    return RadialFunction(std::move(g), std::move(v));
  }

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
  double back() const noexcept { return values.back(); }
  double at_radius(double r) const { return grid->interpolate(values, r); }
};

/// Precomputed product-integration weights of the radial Green operator on a
/// fixed grid and dimension. g is treated as piecewise linear between nodes
/// and every weight is the exact (or 8-point Gauss-Legendre) integral of the
/// corresponding hat function, so
///   * all weights are nonnegative (monotone cumulative integrals),
///   * G[a + b r] is reproduced to rounding,
///   * the t^{1-N} factor never meets t = 0: on the first interval the inner
///     integral is O(t^N) and the weight is a closed form.
class GreenOperator {
 public:
  GreenOperator(GridPtr grid, int dimension);

  const GridPtr& grid() const noexcept { return grid_; }
  int dimension() const noexcept { return dimension_; }

  /// I(r_k) = int_0^{r_k} s^{N-1} g(s) ds.
  RadialFunction cumulative_inner(const RadialFunction& g) const;

  /// G[g] on the grid; g must be nonnegative and finite.
  RadialFunction apply(const RadialFunction& g) const;

  /// Unchecked kernel. Writes G[g] into out and, if non-empty, the radial
  /// derivative (G[g])'(r_k) = r_k^{1-N} I(r_k) into derivative.
  void apply_raw(std::span<const double> g, std::span<double> out,
                 std::span<double> derivative = {}) const;

 private:
  GridPtr grid_;
  int dimension_;
  // Inner integral: I_{k+1} = I_k + inner_lo_k g_k + inner_hi_k g_{k+1}.
  std::vector<double> inner_lo_, inner_hi_;
  // Outer integral: G_{k+1} = G_k + kernel_k I_k + outer_lo_k g_k + outer_hi_k g_{k+1}.
  std::vector<double> kernel_, outer_lo_, outer_hi_;
  // r_k^{1-N}, zero at the origin.
  std::vector<double> inv_radial_power_;
};

RadialFunction cumulative_inner(const RadialFunction& g, int dimension);
RadialFunction green_apply(const RadialFunction& g, int dimension);

/// Discrete radial Laplacian (r^{N-1} w')' / r^{N-1} at interior nodes
/// (result index i corresponds to node i + 1).
std::vector<double> radial_laplacian(const RadialFunction& w, int dimension);

void require_dimension(int dimension);

}  // namespace elliptic
