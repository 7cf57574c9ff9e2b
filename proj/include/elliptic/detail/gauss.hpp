#pragma once

// Composite 8-point Gauss-Legendre rules used by the tail and audit integrals.

#include <array>
#include <cmath>
#include <cstddef>

namespace elliptic::detail {

inline constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

template <typename Fn>
double gauss_panel(const Fn& fn, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
    acc += kGaussWeights[q] * fn(mid + half * kGaussNodes[q]);
  }
  return half * acc;
}

template <typename Fn>
double gauss_uniform(const Fn& fn, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int k = 0; k < panels; ++k) acc += gauss_panel(fn, a + k * h, a + (k + 1) * h);
  return acc;
}

/// Panels in geometric progression; requires 0 < a <= b.
template <typename Fn>
double gauss_geometric(const Fn& fn, double a, double b, int panels) {
  if (b <= a) return 0.0;
  const double ratio = std::pow(b / a, 1.0 / panels);
  double acc = 0.0, lo = a;
  for (int k = 0; k < panels; ++k) {
    const double hi = (k + 1 == panels) ? b : lo * ratio;
    acc += gauss_panel(fn, lo, hi);
    lo = hi;
  }
  return acc;
}

}  // namespace elliptic::detail
