#include "gmce/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "gmce/kernels.hpp"
#include "gmce/rng.hpp"

namespace gmce {

GridField::GridField(int T, Matrix v) : size_T(T), values(std::move(v)) {
  if (T < 1) throw std::invalid_argument("GridField: T must be >= 1");
  const auto side = static_cast<std::size_t>(T) + 1;
  if (values.rows() != side || values.cols() != side)
    throw std::invalid_argument("GridField: values must be (T+1) x (T+1)");
  for (double x : values.data())
    if (!std::isfinite(x)) throw std::invalid_argument("GridField: non-finite value");
}

Matrix white_noise_grid(std::size_t rows, std::size_t cols, double sigma2_eps, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("white_noise_grid: dimensions must be positive");
  if (!(sigma2_eps > 0.0)) throw std::invalid_argument("white_noise_grid: sigma2_eps must be positive");
  const double sd = std::sqrt(sigma2_eps);
  GaussianStream stream(seed);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = sd * stream.next();
  return m;
}

GridField apply_ma_filter(int T, const Matrix& noise, std::span<const double> c1, std::span<const double> c2) {
  if (T < 1) throw std::invalid_argument("apply_ma_filter: T must be >= 1");
  const auto side = static_cast<std::size_t>(T);
  if (noise.rows() != side + c1.size() || noise.cols() != side + c2.size())
    throw std::invalid_argument("apply_ma_filter: noise grid must cover {-N, ..., T}^2");
  return {T, kernels::separable_filter(noise, c1, c2)};
}

GridField simulate_field(int T, const SimConfig& cfg) {
  if (T < 1) throw std::invalid_argument("simulate_field: T must be >= 1");
  if (cfg.n_trunc < 1) throw std::invalid_argument("simulate_field: n_trunc must be >= 1");
  check_model_params(cfg.params);
  const auto c1 = gegenbauer_coeffs(cfg.n_trunc, cfg.params.d1, cfg.params.u1);
  const auto c2 = gegenbauer_coeffs(cfg.n_trunc, cfg.params.d2, cfg.params.u2);
  const auto side = static_cast<std::size_t>(T + cfg.n_trunc + 1);
  const Matrix noise = white_noise_grid(side, side, cfg.params.sigma2_eps, cfg.seed);
  return apply_ma_filter(T, noise, c1, c2);
}

}  // namespace gmce
