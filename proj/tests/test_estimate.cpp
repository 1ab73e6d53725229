#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "gmce/estimate.hpp"
#include "gmce/rng.hpp"

using namespace gmce;

namespace {

constexpr double kPi = std::numbers::pi;

const ContrastContext& ctx() {
  static const ContrastContext c = ContrastContext::make(ModelParams{}, WeightConfig{}, 256);
  return c;
}

GridField field(int T, std::uint64_t seed) { return simulate_field(T, SimConfig{ModelParams{}, 40, seed}); }

}  // namespace

TEST(Optimizer, Quadratic) {
  const auto q = [](const LrdParams& t) { return std::pow(t.d1 - 0.15, 2) + 3 * std::pow(t.d2 - 0.33, 2) + 1.0; };
  const EstimationResult r = minimize_contrast(q, OptimizerOptions{});
  EXPECT_NEAR(r.theta_hat.d1, 0.15, 1e-4);
  EXPECT_NEAR(r.theta_hat.d2, 0.33, 1e-4);
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(r.boundary_flag);
  EXPECT_GT(r.evaluations, 21 * 21);
}

TEST(Optimizer, NeverWorseThanCoarseGrid) {
  const auto f = [](const LrdParams& t) { return std::sin(9 * t.d1) * std::cos(7 * t.d2) + t.d1 * t.d2; };
  const OptimizerOptions o;
  const EstimationResult r = minimize_contrast(f, o);
  const double lo = o.clip_margin, hi = 0.5 - o.clip_margin;
  for (int i = 0; i < o.coarse_grid_n; ++i)
    for (int j = 0; j < o.coarse_grid_n; ++j) {
      const LrdParams g{lo + (hi - lo) * i / (o.coarse_grid_n - 1), lo + (hi - lo) * j / (o.coarse_grid_n - 1)};
      EXPECT_LE(r.objective_value, f(g) + 1e-15);
    }
}

TEST(Optimizer, ClipsToBoxAndFlagsBoundary) {
  const auto f = [](const LrdParams& t) { return std::pow(t.d1 + 0.1, 2) + std::pow(t.d2 - 0.7, 2); };
  const OptimizerOptions o;
  const EstimationResult r = minimize_contrast(f, o);
  EXPECT_NEAR(r.theta_hat.d1, o.clip_margin, 1e-6);
  EXPECT_NEAR(r.theta_hat.d2, 0.5 - o.clip_margin, 1e-6);
  EXPECT_TRUE(r.boundary_flag);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Optimizer, NonFiniteValues) {
  const auto half = [](const LrdParams& t) {
    return t.d1 > 0.3 ? std::numeric_limits<double>::quiet_NaN() : std::pow(t.d1 - 0.1, 2) + std::pow(t.d2 - 0.2, 2);
  };
  const EstimationResult r = minimize_contrast(half, OptimizerOptions{});
  EXPECT_NEAR(r.theta_hat.d1, 0.1, 1e-4);
  EXPECT_FALSE(r.warnings.empty());
  const auto nan = [](const LrdParams&) { return std::numeric_limits<double>::infinity(); };
  EXPECT_THROW(minimize_contrast(nan, OptimizerOptions{}), std::runtime_error);
}

TEST(Optimizer, RejectsBadOptions) {
  OptimizerOptions o;
  o.coarse_grid_n = 1;
  EXPECT_THROW(check_optimizer_options(o), std::invalid_argument);
  o = OptimizerOptions{};
  o.tol_x = 0.0;
  EXPECT_THROW(check_optimizer_options(o), std::invalid_argument);
  o = OptimizerOptions{};
  o.clip_margin = 0.3;
  EXPECT_THROW(check_optimizer_options(o), std::invalid_argument);
}

TEST(Estimate, SpectralDensityInputRecoversTheta) {
  // the population contrast K(theta0, .) is minimized at theta0
  const LrdParams t0{0.2, 0.3};
  const EstimationResult r = estimate_from_periodogram(spectral_density_grid(t0, ctx()), ctx(), OptimizerOptions{});
  EXPECT_NEAR(r.theta_hat.d1, t0.d1, 1e-3);
  EXPECT_NEAR(r.theta_hat.d2, t0.d2, 1e-3);
  EXPECT_NEAR(r.sigma2_hat, sigma2_of_theta(t0, ctx()), 1e-10 * r.sigma2_hat);
}

TEST(Estimate, DeterministicAndSignInvariant) {
  const GridField f = field(20, 3);
  const EstimationResult a = mce(f, ctx(), OptimizerOptions{});
  const EstimationResult b = mce(f, ctx(), OptimizerOptions{});
  EXPECT_EQ(a.theta_hat, b.theta_hat);
  EXPECT_EQ(a.sigma2_hat, b.sigma2_hat);
  GridField neg = f;
  for (double& v : neg.values.data()) v = -v;
  const EstimationResult c = mce(neg, ctx(), OptimizerOptions{});
  EXPECT_NEAR(c.theta_hat.d1, a.theta_hat.d1, 1e-12);
  EXPECT_NEAR(c.theta_hat.d2, a.theta_hat.d2, 1e-12);
  const EstimationResult s = mce_adjusted(neg, ctx(), OptimizerOptions{});
  const EstimationResult t = mce_adjusted(f, ctx(), OptimizerOptions{});
  EXPECT_NEAR(s.theta_hat.d1, t.theta_hat.d1, 1e-12);
  EXPECT_GT(a.sigma2_hat, 0.0);
  EXPECT_TRUE(in_parameter_box(a.theta_hat));
}

TEST(Estimate, ZeroFieldIsRejected) {
  const GridField z(10, Matrix(11, 11));
  EXPECT_THROW(mce(z, ctx(), OptimizerOptions{}), std::domain_error);
  EXPECT_THROW(mce_adjusted(z, ctx(), OptimizerOptions{}), std::domain_error);
  EXPECT_THROW(mce(GridField(1, Matrix(2, 2, 1.0)), ctx(), OptimizerOptions{}), std::invalid_argument);
}

TEST(Estimate, AdjustedMatchesDirectUnbiasedPeriodogram) {
  // I* built by explicit sums over every lag and node, clamped and minimized
  const int T = 5;
  const GridField f = field(T, 9);
  const QuadratureGrid& q = ctx().quad();
  std::vector<double> g;
  for (int a = 1 - T; a <= T - 1; ++a)
    for (int b = 1 - T; b <= T - 1; ++b) g.push_back(sample_autocov(f, {a, b}));
  PeriodogramGrid p{q.axis1().nodes, q.axis2().nodes, Matrix(q.rows(), q.cols())};
  for (std::size_t k = 0; k < q.rows(); ++k)
    for (std::size_t l = 0; l < q.cols(); ++l) {
      double s = 0.0;
      std::size_t i = 0;
      for (int a = 1 - T; a <= T - 1; ++a)
        for (int b = 1 - T; b <= T - 1; ++b) s += g[i++] * std::cos(a * p.freqs1[k] + b * p.freqs2[l]);
      p.values(k, l) = std::max(0.0, s / (4 * kPi * kPi));
    }
  const EstimationResult direct = estimate_from_periodogram(p, ctx(), OptimizerOptions{});
  const EstimationResult fast = mce_adjusted(f, ctx(), OptimizerOptions{});
  EXPECT_NEAR(direct.theta_hat.d1, fast.theta_hat.d1, 1e-8);
  EXPECT_NEAR(direct.theta_hat.d2, fast.theta_hat.d2, 1e-8);
  EXPECT_NEAR(direct.sigma2_hat, fast.sigma2_hat, 1e-10 * fast.sigma2_hat);
}

TEST(Estimate, ErrorShrinksWithSampleSize) {
  const LrdParams t0{0.2, 0.3};
  auto median_error = [&](int T) {
    std::vector<double> e;
    for (int r = 0; r < 15; ++r) {
      const EstimationResult x = mce(field(T, derive_seed(5, T, r)), ctx(), OptimizerOptions{});
      e.push_back(std::hypot(x.theta_hat.d1 - t0.d1, x.theta_hat.d2 - t0.d2));
    }
    std::nth_element(e.begin(), e.begin() + 7, e.end());
    return e[7];
  };
  EXPECT_LT(median_error(50), median_error(10));
}
