#pragma once

// Per-node forcing kernels of the Picard iteration.
//
// Component form:  out_i[k] = c_i[k] * f_i(w_1[k], ..., w_d[k])
// Diagonal form:   out[k]   = c[k]   * sum_i f_i(z[k], ..., z[k])
//
// Every node is independent, so the OpenMP variants split the node range and
// agree with the serial reference bit for bit. Non-finite results are written
// through unchanged; the caller decides whether they mean blow-up.

#include <cstddef>
#include <span>
#include <vector>

#include "elliptic/problem.hpp"

namespace elliptic {

/// Component-major storage: field[i][k] is component i at node k.
using Field = std::vector<std::vector<double>>;

void forcing_serial(const Field& coeff, std::span<const NonlinearityFamily> f, const Field& w,
                    Field& out);
void forcing_parallel(const Field& coeff, std::span<const NonlinearityFamily> f, const Field& w,
                      Field& out);

void diagonal_forcing_serial(std::span<const double> coeff, std::span<const NonlinearityFamily> f,
                             std::size_t d, std::span<const double> z, std::span<double> out);
void diagonal_forcing_parallel(std::span<const double> coeff, std::span<const NonlinearityFamily> f,
                               std::size_t d, std::span<const double> z, std::span<double> out);

}  // namespace elliptic
