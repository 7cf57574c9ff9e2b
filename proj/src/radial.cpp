#include "elliptic/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "elliptic/detail/gauss.hpp"
#include "elliptic/errors.hpp"

namespace elliptic {

namespace {

using detail::kGaussNodes;
using detail::kGaussWeights;

// The outer integrand carries (a/t)^{N-1}, which is far from polynomial when
// h/a is not small. Splitting [a, a + h] into ceil(kOuterPanelScale h / a)
// Gauss panels keeps the first intervals at round-off accuracy.
constexpr double kOuterPanelScale = 4.0;

std::vector<double> binomial_row(int m) {
  std::vector<double> row(static_cast<std::size_t>(m) + 1, 1.0);
  for (int j = 1; j < m; ++j) {
    row[static_cast<std::size_t>(j)] =
        row[static_cast<std::size_t>(j) - 1] * static_cast<double>(m - j + 1) / j;
  }
  return row;
}

}  // namespace

void require_dimension(int dimension) {
  if (dimension < 3) {
    throw PreconditionError("dimension N must be >= 3, got " + std::to_string(dimension));
  }
}

// ---------------------------------------------------------------------------
// RadialGrid

RadialGrid::RadialGrid(std::vector<double> nodes, Spacing policy)
    : nodes_(std::move(nodes)), policy_(policy) {
  if (nodes_.size() < kMinNodes) {
    throw PreconditionError("radial grid needs at least " + std::to_string(kMinNodes) +
                            " nodes, got " + std::to_string(nodes_.size()));
  }
  if (nodes_.front() != 0.0) throw PreconditionError("radial grid must start at r = 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1]) || !std::isfinite(nodes_[i])) {
      throw PreconditionError("radial grid nodes must be finite and strictly increasing");
    }
  }
  quad_weights_.resize(nodes_.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    quad_weights_[i] = 0.5 * (nodes_[i + 1] - nodes_[i]);
    total += 2.0 * quad_weights_[i];
  }
  if (std::abs(total - r_max()) > 1e-12 * r_max()) {
    throw DataError("quadrature weights do not reproduce the grid length");
  }
}

RadialGrid RadialGrid::uniform(double r_max, std::size_t n_nodes) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw PreconditionError("R_max must be positive and finite");
  }
  if (n_nodes < kMinNodes) {
    throw PreconditionError("radial grid needs at least " + std::to_string(kMinNodes) + " nodes");
  }
  std::vector<double> nodes(n_nodes);
  const double n = static_cast<double>(n_nodes - 1);
  for (std::size_t i = 0; i < n_nodes; ++i) nodes[i] = r_max * (static_cast<double>(i) / n);
  nodes.back() = r_max;
  return RadialGrid(std::move(nodes), Spacing::uniform);
}

RadialGrid RadialGrid::graded(double r_max, std::size_t n_nodes, double ratio) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw PreconditionError("R_max must be positive and finite");
  }
  if (n_nodes < kMinNodes) {
    throw PreconditionError("radial grid needs at least " + std::to_string(kMinNodes) + " nodes");
  }
  const std::size_t intervals = n_nodes - 1;
  if (ratio == 0.0) {
    ratio = std::min(kMaxGradedRatio, std::pow(100.0, 1.0 / static_cast<double>(intervals - 1)));
  }
  if (!(ratio > 1.0) || ratio > kMaxGradedRatio) {
    throw PreconditionError("graded spacing ratio must lie in (1, 1.05]");
  }
  // h_0 (q^m - 1) / (q - 1) = r_max
  const double first = r_max * (ratio - 1.0) / std::expm1(static_cast<double>(intervals) * std::log(ratio));
  std::vector<double> nodes(n_nodes, 0.0);
  double h = first;
  for (std::size_t i = 1; i < n_nodes; ++i) {
    nodes[i] = nodes[i - 1] + h;
    h *= ratio;
  }
  nodes.back() = r_max;
  return RadialGrid(std::move(nodes), Spacing::graded);
}

RadialGrid RadialGrid::make(double r_max, std::size_t n_nodes, Spacing policy) {
  return policy == Spacing::uniform ? uniform(r_max, n_nodes) : graded(r_max, n_nodes);
}

double RadialGrid::max_spacing() const noexcept {
  double h = 0.0;
  for (std::size_t i = 0; i < intervals(); ++i) h = std::max(h, spacing(i));
  return h;
}

std::size_t RadialGrid::locate(double r) const {
  if (r <= 0.0) return 0;
  if (r >= r_max()) return intervals() - 1;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

double RadialGrid::interpolate(std::span<const double> values, double r) const {
  if (values.size() != nodes_.size()) throw DataError("sample count does not match grid");
  const std::size_t i = locate(r);
  const double t = (std::clamp(r, 0.0, r_max()) - nodes_[i]) / spacing(i);
  return values[i] + t * (values[i + 1] - values[i]);
}

std::size_t RadialGrid::nearest_node(double r) const {
  const std::size_t i = locate(r);
  return (r - nodes_[i] <= nodes_[i + 1] - r) ? i : i + 1;
}

// ---------------------------------------------------------------------------
// RadialFunction

RadialFunction::RadialFunction(GridPtr g, std::vector<double> v, bool blow_up)
    : grid(std::move(g)), values(std::move(v)), blow_up_trace(blow_up) {
  if (!grid) throw DataError("radial function without a grid");
  if (values.size() != grid->size()) {
    throw DataError("radial function has " + std::to_string(values.size()) +
                    " samples for a grid of " + std::to_string(grid->size()) + " nodes");
  }
  if (!blow_up_trace) {
    for (double x : values) {
      if (!std::isfinite(x)) throw DataError("non-finite sample in radial function");
    }
  }
}

// ---------------------------------------------------------------------------
// GreenOperator

GreenOperator::GreenOperator(GridPtr grid, int dimension)
    : grid_(std::move(grid)), dimension_(dimension) {
  require_dimension(dimension);
  if (!grid_) throw PreconditionError("Green operator needs a grid");
  const std::size_t m = grid_->intervals();
  const int n = dimension;
  const double nd = static_cast<double>(n);
  const std::vector<double> binom = binomial_row(n - 1);

  inner_lo_.resize(m);
  inner_hi_.resize(m);
  kernel_.resize(m);
  outer_lo_.resize(m);
  outer_hi_.resize(m);
  inv_radial_power_.resize(grid_->size());
  inv_radial_power_[0] = 0.0;
  for (std::size_t i = 1; i < grid_->size(); ++i) {
    inv_radial_power_[i] = std::pow(grid_->node(i), 1.0 - nd);
  }

  for (std::size_t k = 0; k < m; ++k) {
    const double a = grid_->node(k);
    const double b = grid_->node(k + 1);
    const double h = b - a;

    if (a == 0.0) {
      // Only the u^{N-1} term of the binomial expansion survives.
      inner_lo_[k] = std::pow(h, nd) / (nd * (nd + 1.0));
      inner_hi_[k] = std::pow(h, nd) / (nd + 1.0);
      kernel_[k] = 0.0;
      outer_hi_[k] = h * h / (3.0 * (nd + 1.0));
      outer_lo_[k] = h * h / (2.0 * nd) - outer_hi_[k];
      continue;
    }

    // s^{N-1} = sum_j C(N-1, j) a^{N-1-j} u^j with u = s - a; every term below
    // is positive, so no cancellation.
    const double scale = std::pow(a, nd - 1.0);
    double lo = 0.0, hi = 0.0, ratio_pow = 1.0;
    for (int j = 0; j < n; ++j) {
      const double jd = static_cast<double>(j);
      const double term = binom[static_cast<std::size_t>(j)] * ratio_pow;
      lo += term / ((jd + 1.0) * (jd + 2.0));
      hi += term / (jd + 2.0);
      ratio_pow *= h / a;
    }
    inner_lo_[k] = scale * h * lo;
    inner_hi_[k] = scale * h * hi;

    // int_a^b t^{1-N} dt = a^{2-N} (1 - (a/b)^{N-2}) / (N-2)
    kernel_[k] = std::pow(a, 2.0 - nd) * -std::expm1((nd - 2.0) * std::log1p(-h / b)) / (nd - 2.0);

    // t^{1-N} times the partial inner integral of each hat function, written
    // with (a/t)^{N-1} so nothing overflows for large a.
    const auto panels = static_cast<std::size_t>(std::ceil(kOuterPanelScale * h / a));
    const double width = h / static_cast<double>(panels);
    double olo = 0.0, ohi = 0.0;
    for (std::size_t panel = 0; panel < panels; ++panel) {
      const double start = width * static_cast<double>(panel);
      for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
        const double u = start + 0.5 * width * (kGaussNodes[q] + 1.0);
        const double t = a + u;
        const double lead = std::pow(a / t, nd - 1.0) / h;
        double p_lo = 0.0, p_hi = 0.0, upow = u;  // upow = u^{j+1} / a^j
        for (int j = 0; j < n; ++j) {
          const double jd = static_cast<double>(j);
          const double c = binom[static_cast<std::size_t>(j)] * upow;
          p_lo += c * (h / (jd + 1.0) - u / (jd + 2.0));
          p_hi += c * u / (jd + 2.0);
          upow *= u / a;
        }
        olo += kGaussWeights[q] * lead * p_lo;
        ohi += kGaussWeights[q] * lead * p_hi;
      }
    }
    outer_lo_[k] = 0.5 * width * olo;
    outer_hi_[k] = 0.5 * width * ohi;
  }
}

void GreenOperator::apply_raw(std::span<const double> g, std::span<double> out,
                              std::span<double> derivative) const {
  const std::size_t m = inner_lo_.size();
  double inner = 0.0;
  double outer = 0.0;
  out[0] = 0.0;
  if (!derivative.empty()) derivative[0] = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    outer += kernel_[k] * inner + outer_lo_[k] * g[k] + outer_hi_[k] * g[k + 1];
    inner += inner_lo_[k] * g[k] + inner_hi_[k] * g[k + 1];
    out[k + 1] = outer;
    if (!derivative.empty()) derivative[k + 1] = inv_radial_power_[k + 1] * inner;
  }
}

RadialFunction GreenOperator::cumulative_inner(const RadialFunction& g) const {
  if (g.values.size() != grid_->size()) throw DataError("sample count does not match grid");
  for (double x : g.values) {
    if (!std::isfinite(x)) throw DataError("non-finite sample passed to cumulative_inner");
  }
  std::vector<double> inner(grid_->size(), 0.0);
  for (std::size_t k = 0; k < inner_lo_.size(); ++k) {
    inner[k + 1] = inner[k] + inner_lo_[k] * g.values[k] + inner_hi_[k] * g.values[k + 1];
  }
  return RadialFunction(grid_, std::move(inner));
}

RadialFunction GreenOperator::apply(const RadialFunction& g) const {
  if (g.values.size() != grid_->size()) throw DataError("sample count does not match grid");
  for (double x : g.values) {
    if (!std::isfinite(x)) throw DataError("non-finite sample passed to green_apply");
    if (x < 0.0) throw PreconditionError("green_apply requires a nonnegative integrand");
  }
  std::vector<double> out(grid_->size());
  apply_raw(g.values, out);
  return RadialFunction(grid_, std::move(out));
}

RadialFunction cumulative_inner(const RadialFunction& g, int dimension) {
  return GreenOperator(g.grid, dimension).cumulative_inner(g);
}

RadialFunction green_apply(const RadialFunction& g, int dimension) {
  return GreenOperator(g.grid, dimension).apply(g);
}

std::vector<double> radial_laplacian(const RadialFunction& w, int dimension) {
  require_dimension(dimension);
  const RadialGrid& grid = *w.grid;
  const double p = static_cast<double>(dimension) - 1.0;
  std::vector<double> lap;
  lap.reserve(grid.size() - 2);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double hl = grid.spacing(i - 1);
    const double hr = grid.spacing(i);
    const double flux_r = std::pow(0.5 * (grid.node(i) + grid.node(i + 1)), p) *
                          (w.values[i + 1] - w.values[i]) / hr;
    const double flux_l = std::pow(0.5 * (grid.node(i - 1) + grid.node(i)), p) *
                          (w.values[i] - w.values[i - 1]) / hl;
    lap.push_back((flux_r - flux_l) / (std::pow(grid.node(i), p) * 0.5 * (hl + hr)));
  }
  return lap;
}

}  // namespace elliptic
