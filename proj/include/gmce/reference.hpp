#pragma once

// Straightforward serial implementations kept as test oracles and benchmark
// baselines for the kernels in gmce/kernels.hpp.

#include <complex>
#include <span>

#include "gmce/kernels.hpp"

namespace gmce::reference {

/// Direct double sum over all (n1, n2) for every output point.
Matrix direct_ma_sum(const Matrix& input, std::span<const double> c1, std::span<const double> c2);

/// Sequential sum over all nodes in row-major order.
double tensor_integrate(const QuadratureGrid& quad, const Matrix& values);

/// Naive four-loop Fourier sum, one frequency pair at a time.
kernels::ComplexGrid direct_dft2(const Matrix& data, int origin1, int origin2, std::span<const double> freqs1,
                                 std::span<const double> freqs2);

Matrix lag_products(const Matrix& field, std::size_t max_lag);

}  // namespace gmce::reference
