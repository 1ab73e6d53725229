#pragma once

// Data-parallel kernels (OpenMP). Every kernel here has a serial counterpart
// in gmce/reference.hpp that tests and the benchmark compare against.
// Reductions use a fixed association order, so results do not depend on the
// number of threads.

#include <complex>
#include <span>
#include <vector>

#include "gmce/matrix.hpp"
#include "gmce/quadrature.hpp"

namespace gmce::kernels {

using ComplexGrid = std::vector<std::complex<double>>;

/// out(t1, t2) = sum_{n1, n2} c1[n1] c2[n2] input(t1 + N1 - n1, t2 + N2 - n2)
/// with N_i = c_i.size() - 1, computed as a filter along rows then columns.
Matrix separable_filter(const Matrix& input, std::span<const double> c1, std::span<const double> c2);

/// sum_{k,l} q1[k] q2[l] values(k, l). Rows are summed in parallel, each row
/// in index order; row totals are then combined by pairwise_sum.
double tensor_integrate(const QuadratureGrid& quad, const Matrix& values);

/// Evaluates X(k1, k2) = sum_{r, c} data(r, c) exp(-i (lam1_k1 (r + origin1) + lam2_k2 (c + origin2)))
/// on the uniform grids lam_i,k = offset_i + k 2pi / n_i through FFTW.
/// Data longer than n_i is folded modulo n_i. Result is n1 x n2 row-major.
ComplexGrid uniform_dft2(const Matrix& data, int origin1, int origin2, double offset1, double offset2,
                         std::size_t n1, std::size_t n2);

/// Same sum evaluated at arbitrary frequencies as two dense matrix products.
ComplexGrid separable_dft2(const Matrix& data, int origin1, int origin2, std::span<const double> freqs1,
                           std::span<const double> freqs2);

/// R(a, b) = sum_{k=0}^{T-a} sum_{l=0}^{T-b} Y(k, l) Y(k + a, l + b) for a, b in [0, max_lag],
/// Y being (T+1) x (T+1).
Matrix lag_products(const Matrix& field, std::size_t max_lag);

}  // namespace gmce::kernels
