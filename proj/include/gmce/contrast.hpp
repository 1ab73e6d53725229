#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gmce/model.hpp"
#include "gmce/periodogram.hpp"
#include "gmce/quadrature.hpp"

namespace gmce {

/// Registry of smooth positive base functions w0. Each is a product of
/// per-axis factors, which keeps every contrast integral separable.
enum class BaseWeight {
  constant,     ///< w0 = 1
  cosine_bump,  ///< w0 = (2 + cos lambda1)(2 + cos lambda2) / 9
};

std::string_view to_string(BaseWeight w) noexcept;
/// Throws std::invalid_argument for unknown names.
BaseWeight parse_base_weight(std::string_view name);

struct WeightConfig {
  double a1 = 2.0;
  double a2 = 2.0;
  BaseWeight w0 = BaseWeight::constant;
};

/// Per-axis data at the quadrature nodes of one axis.
struct AxisTable {
  std::vector<double> weighted;  ///< quadrature weight times the axis factor of w
  std::vector<double> log_dist;  ///< log|2 cos(lambda_k) - 2u|
};

/// Fixed nuisance parameters (u, sigma2_eps), the weight function and the
/// shared quadrature grid. The d components of `model` are ignored.
class ContrastContext {
 public:
  ContrastContext(ModelParams model, WeightConfig weight, QuadratureGrid quad);

  /// Midpoint grid with `nodes_per_axis` nodes per axis.
  static ContrastContext make(const ModelParams& model, const WeightConfig& weight,
                              std::size_t nodes_per_axis = 256);

  const ModelParams& model() const noexcept { return model_; }
  const WeightConfig& weight() const noexcept { return weight_; }
  const QuadratureGrid& quad() const noexcept { return quad_; }
  const AxisTable& axis(std::size_t i) const noexcept { return axes_[i]; }
  double nu(std::size_t i) const noexcept { return nu_[i]; }

  /// log(sigma2_eps / (2 pi)^2), the theta-free part of log f.
  double log_level() const noexcept { return log_level_; }

  /// w(lambda) at quadrature node (k, l), without the quadrature weight.
  double weight_at(std::size_t k, std::size_t l) const noexcept { return node_w_[0][k] * node_w_[1][l]; }

 private:
  ModelParams model_;
  WeightConfig weight_;
  QuadratureGrid quad_;
  std::array<double, 2> nu_{};
  std::array<AxisTable, 2> axes_;
  std::array<std::vector<double>, 2> node_w_;
  double log_level_ = 0.0;
};

/// w(lambda) = |lambda1^2 - nu1^2|^{a1} |lambda2^2 - nu2^2|^{a2} w0(lambda).
double weight(const Frequency& lambda, const ContrastContext& ctx);

/// sigma^2(theta) together with its gradient and Hessian in theta, from the
/// weighted log-moment integrals. All three share the context grid.
struct Sigma2Derivatives {
  double value = 0.0;
  Vec2 grad{};
  Mat2 hess;
};

Sigma2Derivatives sigma2_derivatives(const LrdParams& theta, const ContrastContext& ctx);

/// sigma^2(theta) = integral of f(lambda, theta) w(lambda).
double sigma2_of_theta(const LrdParams& theta, const ContrastContext& ctx);

/// Same integral assembled node by node over the full 2D grid; used to check
/// the separable evaluation.
double sigma2_of_theta_2d(const LrdParams& theta, const ContrastContext& ctx);

/// Psi = f / sigma^2(theta).
double psi(const Frequency& lambda, const LrdParams& theta, const ContrastContext& ctx);

/// Gradient of Psi in theta: (grad f sigma^2 - grad sigma^2 f) / sigma^4.
Vec2 psi_grad(const Frequency& lambda, const LrdParams& theta, const ContrastContext& ctx);

/// K(theta0, theta) = integral of f(., theta0) w log(Psi(., theta0) / Psi(., theta)).
double contrast_K(const LrdParams& theta0, const LrdParams& theta, const ContrastContext& ctx);

/// f(lambda, theta) on the context grid, packaged like a periodogram.
PeriodogramGrid spectral_density_grid(const LrdParams& theta, const ContrastContext& ctx);

/// U_T(theta) = -integral of I(lambda) w(lambda) log Psi(lambda, theta), node by node.
/// The periodogram must sit on the context grid.
double empirical_contrast(const LrdParams& theta, const PeriodogramGrid& pgram, const ContrastContext& ctx);

/// integral of I(lambda) w(lambda).
double sigma2_hat(const PeriodogramGrid& pgram, const ContrastContext& ctx);

/// Throws std::invalid_argument unless the periodogram frequencies are the
/// context quadrature nodes.
void check_on_grid(const PeriodogramGrid& pgram, const ContrastContext& ctx);

/// U_T as a function of theta for one fixed periodogram. Since log Psi is
/// affine in theta apart from log sigma^2(theta),
///   U_T(theta) = -log_level P0 + 2 d1 P1 + 2 d2 P2 + P0 log sigma^2(theta)
/// with P0 = int I w, P_i = int I w log|2cos lambda_i - 2u_i|; this class
/// precomputes the P's and caches sigma^2 per theta bit pattern. Not
/// thread-safe (the cache is per instance).
class ContrastObjective {
 public:
  ContrastObjective(const PeriodogramGrid& pgram, const ContrastContext& ctx);

  double operator()(const LrdParams& theta) const;

  double sigma2_hat() const noexcept { return p0_; }

 private:
  struct BitsHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
    }
  };

  const ContrastContext* ctx_;
  double p0_ = 0.0;
  double p1_ = 0.0;
  double p2_ = 0.0;
  mutable std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, double, BitsHash> sigma2_cache_;
};

}  // namespace gmce
