#pragma once

// Seeded replication studies: consistency of the estimator across sample
// sizes and asymptotic normality of the scaled adjusted estimator.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmce/asymptotics.hpp"
#include "gmce/estimate.hpp"

namespace gmce {

struct StudyConfig {
  explicit StudyConfig(ContrastContext c) : ctx(std::move(c)) {}

  ContrastContext ctx;
  LrdParams theta0{0.2, 0.3};
  std::vector<int> T_values{10, 20, 30, 40, 50};
  int replications = 100;
  std::uint64_t base_seed = 20240101;
  bool adjusted = false;
  std::vector<double> epsilons{0.025, 0.05, 0.1, 0.2};
  std::vector<double> sigma2_epsilons{2.5, 5.0, 10.0, 20.0, 40.0};
  /// Centre for the sigma^2 probabilities; sigma2_of_theta(theta0) when unset.
  std::optional<double> sigma2_reference;
  int n_trunc = 40;
  OptimizerOptions optimizer;
  /// Nuisance parameters for simulation (d is replaced by theta0); ctx.model() when unset.
  std::optional<ModelParams> sim_model;
};

/// Throws std::invalid_argument unless replications >= 1 and T_values is
/// nonempty, strictly ascending and >= 2.
void check_study_config(const StudyConfig& cfg);

struct ReplicationRecord {
  int T = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  LrdParams theta_hat;
  double sigma2_hat = 0.0;
  bool converged = false;
  bool boundary_flag = false;
  bool failed = false;
  std::string error;
};

/// Simulates replication `rep` at size T with seed derive_seed(base_seed, T, rep)
/// and estimates it. Exceptions are caught and recorded in the result.
ReplicationRecord run_replication(const StudyConfig& cfg, int T, int rep);

/// Quantiles reported in each summary.
inline constexpr double kSummaryLevels[] = {0.05, 0.25, 0.5, 0.75, 0.95};

struct SizeSummary {
  int T = 0;
  std::vector<ReplicationRecord> records;  ///< ordered by rep
  double median_error = 0.0;               ///< median Euclidean |theta_hat - theta0|
  std::vector<double> d1_quantiles;        ///< at kSummaryLevels
  std::vector<double> d2_quantiles;
  std::vector<double> sigma2_quantiles;
  std::vector<double> prob_theta;   ///< P(|theta_hat - theta0| < eps) per cfg.epsilons
  std::vector<double> prob_sigma2;  ///< P(|sigma2_hat - ref| < eps) per cfg.sigma2_epsilons
  int failures = 0;
  int nonconverged = 0;
  int boundary_hits = 0;
};

struct ConsistencyReport {
  double sigma2_reference = 0.0;
  std::vector<double> epsilons;
  std::vector<double> sigma2_epsilons;
  std::vector<SizeSummary> sizes;  ///< one per T, in cfg order
};

/// Summary statistics of one T from its records. Failed replications count
/// as misses in the probabilities and are left out of medians and quantiles.
SizeSummary summarize(int T, std::vector<ReplicationRecord> records, const LrdParams& theta0,
                      const std::vector<double>& epsilons, const std::vector<double>& sigma2_epsilons,
                      double sigma2_reference);

/// Runs every (T, rep) pair in parallel. The report depends only on cfg.
ConsistencyReport run_consistency_study(const StudyConfig& cfg);

struct MardiaResult {
  double skewness_stat = 0.0;  ///< n b_{1,2} / 6, chi-square with 4 degrees of freedom
  double kurtosis_stat = 0.0;  ///< (b_{2,2} - 8) / sqrt(64 / n), standard normal
  double p_skew = 0.0;
  double p_kurt = 0.0;
};

/// Mardia's multivariate skewness and kurtosis for bivariate samples.
/// Requires at least 20 samples; throws std::domain_error on a singular
/// sample covariance.
MardiaResult mardia_test(const std::vector<Vec2>& samples);

struct QQPoint {
  double sample_quantile = 0.0;
  double normal_quantile = 0.0;
};

/// Ordered sample against standard normal quantiles at the Blom plotting
/// positions (i + 1 - 3/8) / (n + 1/4).
std::vector<QQPoint> qq_data(std::vector<double> sample);

/// Pearson correlation of the two columns of Q-Q data.
double qq_correlation(const std::vector<QQPoint>& qq);

struct NormalityReport {
  int T = 0;
  std::vector<ReplicationRecord> records;
  std::vector<Vec2> scaled;  ///< T (theta_hat - theta0) for each successful replication
  std::array<std::vector<QQPoint>, 2> qq;
  Vec2 qq_corr{};
  std::optional<MardiaResult> mardia;
  std::string mardia_error;
  Mat2 empirical_cov;
  std::optional<SandwichCovariance> reference;
  std::string reference_error;
  int failures = 0;
};

/// Uses the largest value in cfg.T_values and the adjusted estimator
/// regardless of cfg.adjusted.
NormalityReport run_normality_study(const StudyConfig& cfg);

}  // namespace gmce
