#include "gmce/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gmce/quadrature.hpp"

namespace gmce {

namespace {

constexpr double kPi = std::numbers::pi;

void require_nonzero_order(double d) {
  if (d == 0.0) throw std::invalid_argument("Gegenbauer order d must be nonzero");
}

double axis_cov_sum(const std::vector<double>& c, int lag) {
  const auto j = static_cast<std::size_t>(std::abs(lag));
  double s = 0.0;
  for (std::size_t n = 0; n + j < c.size(); ++n) s += c[n] * c[n + j];
  return s;
}

}  // namespace

double ModelParams::nu1() const { return std::acos(u1); }
double ModelParams::nu2() const { return std::acos(u2); }

void check_model_params(const ModelParams& p) {
  auto fail = [](const std::string& field, double v, const std::string& range) {
    throw std::invalid_argument(field + " = " + std::to_string(v) + " outside admissible range " + range);
  };
  if (!(std::abs(p.u1) < 1.0)) fail("u1", p.u1, "(-1, 1)");
  if (!(std::abs(p.u2) < 1.0)) fail("u2", p.u2, "(-1, 1)");
  if (!(p.d1 > 0.0 && p.d1 < 0.5)) fail("d1", p.d1, "(0, 1/2)");
  if (!(p.d2 > 0.0 && p.d2 < 0.5)) fail("d2", p.d2, "(0, 1/2)");
  if (!(p.sigma2_eps > 0.0)) fail("sigma2_eps", p.sigma2_eps, "(0, inf)");
}

bool in_parameter_box(const LrdParams& theta) noexcept {
  return theta.d1 > 0.0 && theta.d1 < 0.5 && theta.d2 > 0.0 && theta.d2 < 0.5;
}

ModelParams with_theta(ModelParams p, const LrdParams& theta) noexcept {
  p.d1 = theta.d1;
  p.d2 = theta.d2;
  return p;
}

double gegenbauer_poly(int n, double d, double u) {
  if (n < 0) throw std::invalid_argument("gegenbauer_poly: n must be nonnegative");
  require_nonzero_order(d);
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * d * u;
  for (int k = 2; k <= n; ++k) {
    const double next = (2.0 * u * (k + d - 1.0) * cur - (k + 2.0 * d - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> gegenbauer_coeffs(int n_max, double d, double u) {
  if (n_max < 0) throw std::invalid_argument("gegenbauer_coeffs: n_max must be nonnegative");
  require_nonzero_order(d);
  std::vector<double> c(static_cast<std::size_t>(n_max) + 1);
  c[0] = 1.0;
  if (n_max >= 1) c[1] = 2.0 * d * u;
  for (int k = 2; k <= n_max; ++k) {
    c[k] = (2.0 * u * (k + d - 1.0) * c[k - 1] - (k + 2.0 * d - 2.0) * c[k - 2]) / k;
  }
  return c;
}

double log_pole_distance(double lambda, double u) {
  const double nu = std::acos(u);
  const double dist = std::abs(4.0 * std::sin(0.5 * (lambda + nu)) * std::sin(0.5 * (lambda - nu)));
  if (dist == 0.0) throw SingularEvaluation("spectral density evaluated at a pole frequency");
  return std::log(dist);
}

double spectral_density(const Frequency& lambda, const ModelParams& params) {
  const double l1 = log_pole_distance(lambda.lambda1, params.u1);
  const double l2 = log_pole_distance(lambda.lambda2, params.u2);
  return params.sigma2_eps / (4.0 * kPi * kPi) * std::exp(-2.0 * params.d1 * l1 - 2.0 * params.d2 * l2);
}

Vec2 spectral_density_grad(const Frequency& lambda, const ModelParams& params) {
  const double l1 = log_pole_distance(lambda.lambda1, params.u1);
  const double l2 = log_pole_distance(lambda.lambda2, params.u2);
  const double f = params.sigma2_eps / (4.0 * kPi * kPi) * std::exp(-2.0 * params.d1 * l1 - 2.0 * params.d2 * l2);
  return {-2.0 * l1 * f, -2.0 * l2 * f};
}

Mat2 spectral_density_hess(const Frequency& lambda, const ModelParams& params) {
  const double l1 = log_pole_distance(lambda.lambda1, params.u1);
  const double l2 = log_pole_distance(lambda.lambda2, params.u2);
  const double f = params.sigma2_eps / (4.0 * kPi * kPi) * std::exp(-2.0 * params.d1 * l1 - 2.0 * params.d2 * l2);
  Mat2 h;
  h(0, 0) = 4.0 * l1 * l1 * f;
  h(1, 1) = 4.0 * l2 * l2 * f;
  h(0, 1) = h(1, 0) = 4.0 * l1 * l2 * f;
  return h;
}

double autocov_quadrature(const Lag& lag, const ModelParams& params, const QuadratureGrid& quad) {
  validate_grid(quad, params);
  // f is a product of per-axis factors and cos(a+b) = cos a cos b - sin a sin b,
  // so the tensor sum factorizes exactly.
  auto axis_sums = [](const AxisRule& rule, double u, double d, int j) {
    std::vector<double> c(rule.size()), s(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double lam = rule.nodes[k];
      const double g = rule.weights[k] * std::exp(-2.0 * d * log_pole_distance(lam, u));
      c[k] = g * std::cos(j * lam);
      s[k] = g * std::sin(j * lam);
    }
    return std::array<double, 2>{pairwise_sum(c), pairwise_sum(s)};
  };
  const auto a = axis_sums(quad.axis1(), params.u1, params.d1, lag.j1);
  const auto b = axis_sums(quad.axis2(), params.u2, params.d2, lag.j2);
  return params.sigma2_eps / (4.0 * kPi * kPi) * (a[0] * b[0] - a[1] * b[1]);
}

double autocov_asymptotic(const Lag& lag, const ModelParams& params) {
  if (lag.j1 < 1 || lag.j2 < 1)
    throw std::invalid_argument("autocov_asymptotic: lag components must be >= 1");
  auto factor = [&](int j, double d, double nu) {
    return std::pow(2.0, 1.0 - 2.0 * d) * params.sigma2_eps / (kPi * std::pow(std::sin(nu), 2.0 * d)) *
           std::sin(d * kPi) * std::tgamma(1.0 - 2.0 * d) * std::cos(j * nu) *
           std::exp(std::lgamma(j + 2.0 * d) - std::lgamma(j + 1.0));
  };
  return factor(lag.j1, params.d1, params.nu1()) * factor(lag.j2, params.d2, params.nu2());
}

double autocov_truncated_ma(const Lag& lag, const ModelParams& params, int n_trunc) {
  if (n_trunc < 0) throw std::invalid_argument("autocov_truncated_ma: n_trunc must be nonnegative");
  const auto c1 = gegenbauer_coeffs(n_trunc, params.d1, params.u1);
  const auto c2 = gegenbauer_coeffs(n_trunc, params.d2, params.u2);
  return params.sigma2_eps * axis_cov_sum(c1, lag.j1) * axis_cov_sum(c2, lag.j2);
}

}  // namespace gmce
