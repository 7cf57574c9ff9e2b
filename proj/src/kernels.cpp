#include "elliptic/kernels.hpp"

#include "elliptic/errors.hpp"

namespace elliptic {

namespace {

void check_shapes(const Field& coeff, std::span<const NonlinearityFamily> f, const Field& w,
                  Field& out) {
  const std::size_t d = w.size();
  if (coeff.size() != d || f.size() != d || d == 0) {
    throw DataError("forcing kernel: component counts differ");
  }
  const std::size_t n = w.front().size();
  for (std::size_t i = 0; i < d; ++i) {
    if (coeff[i].size() != n || w[i].size() != n) throw DataError("forcing kernel: node counts differ");
  }
  out.resize(d);
  for (auto& row : out) row.resize(n);
}

inline void forcing_node(const Field& coeff, std::span<const NonlinearityFamily> f, const Field& w,
                         Field& out, std::size_t k, std::vector<double>& point) {
  const std::size_t d = w.size();
  for (std::size_t j = 0; j < d; ++j) point[j] = w[j][k];
  for (std::size_t i = 0; i < d; ++i) {
    // A zero coefficient gives zero forcing even when f overflowed.
    out[i][k] = coeff[i][k] == 0.0 ? 0.0 : coeff[i][k] * f[i](point);
  }
}

inline double diagonal_node(double c, std::span<const NonlinearityFamily> f, std::size_t d, double z) {
  if (c == 0.0) return 0.0;
  double acc = 0.0;
  for (const NonlinearityFamily& fi : f) acc += fi.diagonal(z, d);
  return c * acc;
}

void check_diagonal(std::span<const double> coeff, std::span<const double> z, std::span<double> out) {
  if (coeff.size() != z.size() || out.size() != z.size()) {
    throw DataError("diagonal forcing kernel: node counts differ");
  }
}

}  // namespace

void forcing_serial(const Field& coeff, std::span<const NonlinearityFamily> f, const Field& w,
                    Field& out) {
  check_shapes(coeff, f, w, out);
  std::vector<double> point(w.size());
  const std::size_t n = w.front().size();
  for (std::size_t k = 0; k < n; ++k) forcing_node(coeff, f, w, out, k, point);
}

void forcing_parallel(const Field& coeff, std::span<const NonlinearityFamily> f, const Field& w,
                      Field& out) {
  check_shapes(coeff, f, w, out);
  const auto n = static_cast<long long>(w.front().size());
#pragma omp parallel
  {
    std::vector<double> point(w.size());
#pragma omp for schedule(static)
    for (long long k = 0; k < n; ++k) {
      forcing_node(coeff, f, w, out, static_cast<std::size_t>(k), point);
    }
  }
}

void diagonal_forcing_serial(std::span<const double> coeff, std::span<const NonlinearityFamily> f,
                             std::size_t d, std::span<const double> z, std::span<double> out) {
  check_diagonal(coeff, z, out);
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = diagonal_node(coeff[k], f, d, z[k]);
}

void diagonal_forcing_parallel(std::span<const double> coeff, std::span<const NonlinearityFamily> f,
                               std::size_t d, std::span<const double> z, std::span<double> out) {
  check_diagonal(coeff, z, out);
  const auto n = static_cast<long long>(z.size());
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    out[i] = diagonal_node(coeff[i], f, d, z[i]);
  }
}

}  // namespace elliptic
