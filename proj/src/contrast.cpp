#include "gmce/contrast.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gmce/kernels.hpp"

namespace gmce {

namespace {

constexpr double kPi = std::numbers::pi;

double base_axis_factor(BaseWeight w0, double lambda) noexcept {
  switch (w0) {
    case BaseWeight::constant:
      return 1.0;
    case BaseWeight::cosine_bump:
      return (2.0 + std::cos(lambda)) / 3.0;
  }
  return 1.0;
}

double axis_weight(double lambda, double nu, double a, BaseWeight w0) noexcept {
  return std::pow(std::abs(lambda * lambda - nu * nu), a) * base_axis_factor(w0, lambda);
}

struct AxisMoments {
  double m0 = 0.0;  // sum W e
  double m1 = 0.0;  // sum W L e
  double m2 = 0.0;  // sum W L^2 e
};

AxisMoments axis_moments(const AxisTable& t, double d) {
  const std::size_t n = t.weighted.size();
  std::vector<double> v0(n), v1(n), v2(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double L = t.log_dist[k];
    const double e = t.weighted[k] * std::exp(-2.0 * d * L);
    v0[k] = e;
    v1[k] = e * L;
    v2[k] = e * L * L;
  }
  return {pairwise_sum(v0), pairwise_sum(v1), pairwise_sum(v2)};
}

}  // namespace

std::string_view to_string(BaseWeight w) noexcept {
  switch (w) {
    case BaseWeight::constant:
      return "constant";
    case BaseWeight::cosine_bump:
      return "cosine_bump";
  }
  return "constant";
}

BaseWeight parse_base_weight(std::string_view name) {
  if (name == "constant") return BaseWeight::constant;
  if (name == "cosine_bump") return BaseWeight::cosine_bump;
  throw std::invalid_argument("unknown base weight '" + std::string(name) + "' (expected constant or cosine_bump)");
}

ContrastContext::ContrastContext(ModelParams model, WeightConfig weight, QuadratureGrid quad)
    : model_(model), weight_(weight), quad_(std::move(quad)) {
  if (!(std::abs(model_.u1) < 1.0) || !(std::abs(model_.u2) < 1.0))
    throw std::invalid_argument("ContrastContext: |u_i| must be < 1");
  if (!(model_.sigma2_eps > 0.0)) throw std::invalid_argument("ContrastContext: sigma2_eps must be positive");
  if (!(weight_.a1 > 1.0) || !(weight_.a2 > 1.0))
    throw std::invalid_argument("ContrastContext: weight exponents a_i must exceed 1");
  validate_grid(quad_, model_);
  nu_ = {model_.nu1(), model_.nu2()};
  const std::array<double, 2> a{weight_.a1, weight_.a2};
  const std::array<double, 2> u{model_.u1, model_.u2};
  const std::array<const AxisRule*, 2> rules{&quad_.axis1(), &quad_.axis2()};
  for (std::size_t i = 0; i < 2; ++i) {
    const AxisRule& r = *rules[i];
    axes_[i].weighted.resize(r.size());
    axes_[i].log_dist.resize(r.size());
    node_w_[i].resize(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
      node_w_[i][k] = axis_weight(r.nodes[k], nu_[i], a[i], weight_.w0);
      axes_[i].weighted[k] = r.weights[k] * node_w_[i][k];
      axes_[i].log_dist[k] = log_pole_distance(r.nodes[k], u[i]);
    }
  }
  log_level_ = std::log(model_.sigma2_eps / (4.0 * kPi * kPi));
}

ContrastContext ContrastContext::make(const ModelParams& model, const WeightConfig& weight,
                                      std::size_t nodes_per_axis) {
  return {model, weight, midpoint_grid(nodes_per_axis, model)};
}

double weight(const Frequency& lambda, const ContrastContext& ctx) {
  const auto& w = ctx.weight();
  return axis_weight(lambda.lambda1, ctx.nu(0), w.a1, w.w0) * axis_weight(lambda.lambda2, ctx.nu(1), w.a2, w.w0);
}

Sigma2Derivatives sigma2_derivatives(const LrdParams& theta, const ContrastContext& ctx) {
  const AxisMoments a = axis_moments(ctx.axis(0), theta.d1);
  const AxisMoments b = axis_moments(ctx.axis(1), theta.d2);
  const double c = std::exp(ctx.log_level());
  Sigma2Derivatives s;
  s.value = c * a.m0 * b.m0;
  s.grad = {-2.0 * c * a.m1 * b.m0, -2.0 * c * a.m0 * b.m1};
  s.hess(0, 0) = 4.0 * c * a.m2 * b.m0;
  s.hess(1, 1) = 4.0 * c * a.m0 * b.m2;
  s.hess(0, 1) = s.hess(1, 0) = 4.0 * c * a.m1 * b.m1;
  return s;
}

double sigma2_of_theta(const LrdParams& theta, const ContrastContext& ctx) {
  const AxisMoments a = axis_moments(ctx.axis(0), theta.d1);
  const AxisMoments b = axis_moments(ctx.axis(1), theta.d2);
  return std::exp(ctx.log_level()) * a.m0 * b.m0;
}

double sigma2_of_theta_2d(const LrdParams& theta, const ContrastContext& ctx) {
  const auto& q = ctx.quad();
  const ModelParams p = with_theta(ctx.model(), theta);
  Matrix v(q.rows(), q.cols());
  for (std::size_t k = 0; k < q.rows(); ++k)
    for (std::size_t l = 0; l < q.cols(); ++l) v(k, l) = spectral_density(q.node(k, l), p) * ctx.weight_at(k, l);
  return kernels::tensor_integrate(q, v);
}

double psi(const Frequency& lambda, const LrdParams& theta, const ContrastContext& ctx) {
  return spectral_density(lambda, with_theta(ctx.model(), theta)) / sigma2_of_theta(theta, ctx);
}

Vec2 psi_grad(const Frequency& lambda, const LrdParams& theta, const ContrastContext& ctx) {
  const ModelParams p = with_theta(ctx.model(), theta);
  const double f = spectral_density(lambda, p);
  const Vec2 df = spectral_density_grad(lambda, p);
  const auto s = sigma2_derivatives(theta, ctx);
  const double s4 = s.value * s.value;
  return {(df[0] * s.value - s.grad[0] * f) / s4, (df[1] * s.value - s.grad[1] * f) / s4};
}

double contrast_K(const LrdParams& theta0, const LrdParams& theta, const ContrastContext& ctx) {
  const auto& q = ctx.quad();
  const auto& t1 = ctx.axis(0);
  const auto& t2 = ctx.axis(1);
  const double log_s0 = std::log(sigma2_of_theta(theta0, ctx));
  const double log_s = std::log(sigma2_of_theta(theta, ctx));
  Matrix v(q.rows(), q.cols());
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < q.rows(); ++k) {
    const double L1 = t1.log_dist[k];
    for (std::size_t l = 0; l < q.cols(); ++l) {
      const double L2 = t2.log_dist[l];
      const double log_f0 = ctx.log_level() - 2.0 * theta0.d1 * L1 - 2.0 * theta0.d2 * L2;
      const double log_f = ctx.log_level() - 2.0 * theta.d1 * L1 - 2.0 * theta.d2 * L2;
      const double log_ratio = (log_f0 - log_s0) - (log_f - log_s);
      v(k, l) = ctx.weight_at(k, l) * std::exp(log_f0) * log_ratio;
    }
  }
  return kernels::tensor_integrate(q, v);
}

PeriodogramGrid spectral_density_grid(const LrdParams& theta, const ContrastContext& ctx) {
  const auto& q = ctx.quad();
  PeriodogramGrid g{q.axis1().nodes, q.axis2().nodes, Matrix(q.rows(), q.cols())};
  for (std::size_t k = 0; k < q.rows(); ++k)
    for (std::size_t l = 0; l < q.cols(); ++l)
      g.values(k, l) =
          std::exp(ctx.log_level() - 2.0 * theta.d1 * ctx.axis(0).log_dist[k] - 2.0 * theta.d2 * ctx.axis(1).log_dist[l]);
  return g;
}

void check_on_grid(const PeriodogramGrid& pgram, const ContrastContext& ctx) {
  if (pgram.freqs1 != ctx.quad().axis1().nodes || pgram.freqs2 != ctx.quad().axis2().nodes ||
      pgram.values.rows() != ctx.quad().rows() || pgram.values.cols() != ctx.quad().cols())
    throw std::invalid_argument("periodogram frequencies do not match the quadrature grid");
}

double empirical_contrast(const LrdParams& theta, const PeriodogramGrid& pgram, const ContrastContext& ctx) {
  check_on_grid(pgram, ctx);
  const auto& q = ctx.quad();
  const double log_s = std::log(sigma2_of_theta(theta, ctx));
  Matrix v(q.rows(), q.cols());
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < q.rows(); ++k) {
    const double L1 = ctx.axis(0).log_dist[k];
    for (std::size_t l = 0; l < q.cols(); ++l) {
      const double log_psi = ctx.log_level() - 2.0 * theta.d1 * L1 - 2.0 * theta.d2 * ctx.axis(1).log_dist[l] - log_s;
      v(k, l) = ctx.weight_at(k, l) * pgram.values(k, l) * log_psi;
    }
  }
  return -kernels::tensor_integrate(q, v);
}

double sigma2_hat(const PeriodogramGrid& pgram, const ContrastContext& ctx) {
  check_on_grid(pgram, ctx);
  const auto& q = ctx.quad();
  Matrix v(q.rows(), q.cols());
  for (std::size_t k = 0; k < q.rows(); ++k)
    for (std::size_t l = 0; l < q.cols(); ++l) v(k, l) = ctx.weight_at(k, l) * pgram.values(k, l);
  return kernels::tensor_integrate(q, v);
}

ContrastObjective::ContrastObjective(const PeriodogramGrid& pgram, const ContrastContext& ctx) : ctx_(&ctx) {
  check_on_grid(pgram, ctx);
  const auto& q = ctx.quad();
  Matrix v0(q.rows(), q.cols()), v1(q.rows(), q.cols()), v2(q.rows(), q.cols());
  for (std::size_t k = 0; k < q.rows(); ++k)
    for (std::size_t l = 0; l < q.cols(); ++l) {
      const double iw = ctx.weight_at(k, l) * pgram.values(k, l);
      v0(k, l) = iw;
      v1(k, l) = iw * ctx.axis(0).log_dist[k];
      v2(k, l) = iw * ctx.axis(1).log_dist[l];
    }
  p0_ = kernels::tensor_integrate(q, v0);
  p1_ = kernels::tensor_integrate(q, v1);
  p2_ = kernels::tensor_integrate(q, v2);
}

double ContrastObjective::operator()(const LrdParams& theta) const {
  const std::pair key{std::bit_cast<std::uint64_t>(theta.d1), std::bit_cast<std::uint64_t>(theta.d2)};
  auto it = sigma2_cache_.find(key);
  if (it == sigma2_cache_.end()) it = sigma2_cache_.emplace(key, sigma2_of_theta(theta, *ctx_)).first;
  return -ctx_->log_level() * p0_ + 2.0 * theta.d1 * p1_ + 2.0 * theta.d2 * p2_ + p0_ * std::log(it->second);
}

}  // namespace gmce
