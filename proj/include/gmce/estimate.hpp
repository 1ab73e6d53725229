#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gmce/contrast.hpp"
#include "gmce/simulate.hpp"

namespace gmce {

struct OptimizerOptions {
  int coarse_grid_n = 21;
  double tol_x = 1e-5;
  double tol_f = 1e-8;
  int max_evals = 2000;
  double clip_margin = 1e-3;
};

/// Throws std::invalid_argument on nonpositive tolerances, coarse_grid_n < 2,
/// max_evals < 1 or a clip margin outside (0, 1/4).
void check_optimizer_options(const OptimizerOptions& opts);

struct EstimationResult {
  LrdParams theta_hat;
  double sigma2_hat = 0.0;
  double objective_value = 0.0;
  int evaluations = 0;
  bool converged = false;
  bool boundary_flag = false;
  std::vector<std::string> warnings;
};

using Objective = std::function<double(const LrdParams&)>;

/// Coarse grid of coarse_grid_n^2 points over [delta, 1/2 - delta]^2, then a
/// Nelder-Mead simplex started at the best grid point with every vertex
/// clipped to the box. Non-finite probes are discarded with a warning; if no
/// grid point is finite std::runtime_error is thrown. sigma2_hat is left 0.
EstimationResult minimize_contrast(const Objective& objective, const OptimizerOptions& opts);

/// Minimizes U_T for a periodogram already on the context grid. Throws
/// std::domain_error if the periodogram integrates to zero against w (the
/// objective is then constant in theta).
EstimationResult estimate_from_periodogram(const PeriodogramGrid& pgram, const ContrastContext& ctx,
                                           const OptimizerOptions& opts);

/// Minimum contrast estimate from the raw periodogram I_T.
EstimationResult mce(const GridField& field, const ContrastContext& ctx, const OptimizerOptions& opts);

/// Adjusted estimate from the unbiased periodogram I*_T clamped at zero.
EstimationResult mce_adjusted(const GridField& field, const ContrastContext& ctx, const OptimizerOptions& opts);

}  // namespace gmce
