#pragma once

// Closed-form mathematics of the two-parameter Gegenbauer random field:
// polynomial coefficients, the spectral density with its theta-derivatives,
// and two autocovariance evaluations.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gmce/matrix.hpp"

namespace gmce {

class QuadratureGrid;

/// Thrown when the spectral density is evaluated exactly at a pole.
class SingularEvaluation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Full parameter vector of the field. u_i = cos(nu_i) locate the spectral
/// poles, d_i are the long-memory exponents, sigma2_eps the noise variance.
struct ModelParams {
  double u1 = 0.4;
  double u2 = 0.3;
  double d1 = 0.2;
  double d2 = 0.3;
  double sigma2_eps = 1.0;

  double nu1() const;
  double nu2() const;
};

/// Throws std::invalid_argument naming the offending field unless
/// |u_i| < 1, 0 < d_i < 1/2 and sigma2_eps > 0.
void check_model_params(const ModelParams& p);

/// The estimated subvector theta = (d1, d2).
struct LrdParams {
  double d1 = 0.0;
  double d2 = 0.0;

  double operator[](std::size_t i) const noexcept { return i == 0 ? d1 : d2; }
  friend bool operator==(const LrdParams&, const LrdParams&) = default;
};

/// True when theta lies in the open box (0, 1/2)^2.
bool in_parameter_box(const LrdParams& theta) noexcept;

/// Copy of `p` with (d1, d2) replaced by theta.
ModelParams with_theta(ModelParams p, const LrdParams& theta) noexcept;

struct Frequency {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct Lag {
  int j1 = 0;
  int j2 = 0;
};

using Vec2 = std::array<double, 2>;

// ---------------------------------------------------------------------------
// Gegenbauer polynomials

/// C_n^{(d)}(u) via the three-term recurrence.
double gegenbauer_poly(int n, double d, double u);

/// (C_0^{(d)}(u), ..., C_{n_max}^{(d)}(u)); the MA coefficients of (1 - 2ub + b^2)^{-d}.
std::vector<double> gegenbauer_coeffs(int n_max, double d, double u);

// ---------------------------------------------------------------------------
// Spectral density

/// log|2 cos(lambda) - 2u|, evaluated through the product form
/// -4 sin((lambda+nu)/2) sin((lambda-nu)/2) so it stays accurate near the pole.
/// Throws SingularEvaluation when the distance is exactly zero.
double log_pole_distance(double lambda, double u);

/// f(lambda) = sigma2_eps / (2 pi)^2 * prod_i |2 cos(lambda_i) - 2 u_i|^{-2 d_i}.
double spectral_density(const Frequency& lambda, const ModelParams& params);

/// Gradient of f with respect to (d1, d2): -2 log|2cos(lambda_i) - 2u_i| f.
Vec2 spectral_density_grad(const Frequency& lambda, const ModelParams& params);

/// Hessian of f with respect to (d1, d2): 4 log|.|_i log|.|_j f.
Mat2 spectral_density_hess(const Frequency& lambda, const ModelParams& params);

// ---------------------------------------------------------------------------
// Autocovariance

/// gamma(j) = integral of f(lambda) cos(j1 lambda1 + j2 lambda2) over [-pi, pi]^2
/// evaluated on a tensor quadrature grid (typically graded_grid()).
double autocov_quadrature(const Lag& lag, const ModelParams& params, const QuadratureGrid& quad);

/// Large-lag product approximation, transcribed term for term including
/// sigma2_eps inside each of the two factors (so sigma2_eps^2 overall).
/// Requires j1, j2 >= 1.
double autocov_asymptotic(const Lag& lag, const ModelParams& params);

/// Exact autocovariance of the MA field truncated at n_trunc terms per axis:
/// sigma2_eps * prod_i sum_n C_n C_{n+|j_i|}. This is the covariance the
/// simulator actually produces.
double autocov_truncated_ma(const Lag& lag, const ModelParams& params, int n_trunc);

}  // namespace gmce
