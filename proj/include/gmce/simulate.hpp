#pragma once

#include <cstdint>
#include <span>

#include "gmce/matrix.hpp"
#include "gmce/model.hpp"

namespace gmce {

/// Observations Y(t1, t2) on {0, ..., T}^2, stored as a (T+1) x (T+1) matrix.
struct GridField {
  int size_T = 0;
  Matrix values;

  GridField() = default;
  GridField(int T, Matrix v);

  double operator()(int t1, int t2) const noexcept {
    return values(static_cast<std::size_t>(t1), static_cast<std::size_t>(t2));
  }
};

struct SimConfig {
  ModelParams params;
  int n_trunc = 40;
  std::uint64_t seed = 0;
};

/// rows x cols i.i.d. N(0, sigma2_eps) draws, filled row-major from one
/// GaussianStream(seed).
Matrix white_noise_grid(std::size_t rows, std::size_t cols, double sigma2_eps, std::uint64_t seed);

/// Truncated moving-average realization
///   Y(t) = sum_{n1,n2=0}^{N} C_{n1}^{(d1)}(u1) C_{n2}^{(d2)}(u2) eps(t1-n1, t2-n2)
/// with eps drawn on the extended grid {-N, ..., T}^2 (row-major, row index
/// t1 + N). Computed as a row filter followed by a column filter.
GridField simulate_field(int T, const SimConfig& cfg);

/// The filtering step of simulate_field for explicit coefficient sequences.
/// `noise` must be (T + c1.size()) x (T + c2.size()).
GridField apply_ma_filter(int T, const Matrix& noise, std::span<const double> c1,
                          std::span<const double> c2);

}  // namespace gmce
