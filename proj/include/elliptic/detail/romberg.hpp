#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace elliptic {

template <typename Fn>
double romberg(Fn&& fn, double a, double b, double rel_tol, int max_levels) {
  if (a == b) return 0.0;
  std::vector<double> prev, cur;
  double h = b - a;
  prev.push_back(0.5 * h * (fn(a) + fn(b)));
  for (int level = 1; level < max_levels; ++level) {
    h *= 0.5;
    const long long fresh = 1LL << (level - 1);
    double sum = 0.0;
    for (long long i = 0; i < fresh; ++i) sum += fn(a + static_cast<double>(2 * i + 1) * h);
    cur.assign(static_cast<std::size_t>(level) + 1, 0.0);
    cur[0] = 0.5 * prev[0] + h * sum;
    double factor = 4.0;
    for (int m = 1; m <= level; ++m) {
      cur[m] = cur[m - 1] + (cur[m - 1] - prev[m - 1]) / (factor - 1.0);
      factor *= 4.0;
    }
    const double delta = std::abs(cur[level] - prev[level - 1]);
    if (level >= 4 && delta <= rel_tol * std::max(std::abs(cur[level]), 1e-300)) {
      return cur[level];
    }
    prev.swap(cur);
  }
  return prev.back();
}

}  // namespace elliptic
