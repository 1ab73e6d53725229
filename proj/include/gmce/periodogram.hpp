#pragma once

#include <vector>

#include "gmce/matrix.hpp"
#include "gmce/quadrature.hpp"
#include "gmce/simulate.hpp"

namespace gmce {

/// Rectangular frequency grid; both axes sorted ascending within [-pi, pi].
struct FrequencyGrid {
  std::vector<double> freqs1;
  std::vector<double> freqs2;
};

/// The nodes of a quadrature grid viewed as a frequency grid.
FrequencyGrid frequency_grid(const QuadratureGrid& quad);

/// I_T or I*_T sampled on a rectangular grid; values(k1, k2) sits at
/// (freqs1[k1], freqs2[k2]).
struct PeriodogramGrid {
  std::vector<double> freqs1;
  std::vector<double> freqs2;
  Matrix values;
};

/// Unbiased lag covariances over {1-T, ..., T-1}^2. Storage is the
/// (2T-1) x (2T-1) matrix indexed by (j1 + T - 1, j2 + T - 1).
struct LagCovTable {
  int size_T = 0;
  Matrix values;

  double at(int j1, int j2) const noexcept {
    return values(static_cast<std::size_t>(j1 + size_T - 1), static_cast<std::size_t>(j2 + size_T - 1));
  }
};

/// I_T(lambda) = |sum_{t1,t2=0}^{T} exp(-i(t1 lambda1 + t2 lambda2)) Y(t1,t2)|^2 / (2 pi T)^2.
/// Note the (2 pi T)^2 normalization although (T+1)^2 points enter the sum.
/// Uniform axes with spacing 2pi/n go through the FFT; other grids use a
/// separable direct transform.
PeriodogramGrid periodogram(const GridField& field, const FrequencyGrid& freqs);

/// gamma_hat(t) = sum_{k=0}^{T-|t1|} sum_{l=0}^{T-|t2|} Y(k,l) Y(|t1|+k, |t2|+l) / ((T-|t1|)(T-|t2|)).
/// The inclusive sums carry T-|t_i|+1 terms while the normalizer is T-|t_i|.
double sample_autocov(const GridField& field, const Lag& lag);

/// sample_autocov over every lag in {1-T, ..., T-1}^2. Requires T >= 2.
LagCovTable lag_cov_table(const GridField& field);

/// I*_T(lambda) = (2 pi)^-2 sum_{t in {1-T..T-1}^2} exp(-i lambda.t) gamma_hat(t), real part.
/// With clamp_at_zero negative values become 0. If `max_imag_part` is given
/// it receives the largest |Im| seen before the real part is taken.
PeriodogramGrid unbiased_periodogram(const GridField& field, const FrequencyGrid& freqs, bool clamp_at_zero,
                                     double* max_imag_part = nullptr);

/// Same as above from a precomputed lag table.
PeriodogramGrid unbiased_periodogram(const LagCovTable& table, const FrequencyGrid& freqs, bool clamp_at_zero,
                                     double* max_imag_part = nullptr);

}  // namespace gmce
