#include "gmce/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "gmce/rng.hpp"
#include "gmce/simulate.hpp"

namespace gmce {

namespace {

double quantile(std::vector<double> v, double p) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<double> quantiles(const std::vector<double>& v) {
  std::vector<double> out;
  for (double p : kSummaryLevels) out.push_back(quantile(v, p));
  return out;
}

double theta_error(const LrdParams& a, const LrdParams& b) { return std::hypot(a.d1 - b.d1, a.d2 - b.d2); }

std::vector<ReplicationRecord> run_jobs(const StudyConfig& cfg, const std::vector<int>& sizes) {
  const int reps = cfg.replications;
  const long n_jobs = static_cast<long>(sizes.size()) * reps;
  std::vector<ReplicationRecord> out(static_cast<std::size_t>(n_jobs));
#pragma omp parallel for schedule(dynamic, 1)
  for (long job = 0; job < n_jobs; ++job) {
    const int T = sizes[static_cast<std::size_t>(job / reps)];
    out[static_cast<std::size_t>(job)] = run_replication(cfg, T, static_cast<int>(job % reps));
  }
  return out;
}

}  // namespace

void check_study_config(const StudyConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("study: replications must be >= 1");
  if (cfg.T_values.empty()) throw std::invalid_argument("study: T_values must not be empty");
  for (std::size_t i = 0; i < cfg.T_values.size(); ++i) {
    if (cfg.T_values[i] < 2) throw std::invalid_argument("study: every T must be >= 2");
    if (i > 0 && cfg.T_values[i] <= cfg.T_values[i - 1])
      throw std::invalid_argument("study: T_values must be strictly ascending");
  }
  if (cfg.n_trunc < 1) throw std::invalid_argument("study: n_trunc must be >= 1");
  if (!in_parameter_box(cfg.theta0)) throw std::invalid_argument("study: theta0 must lie in (0, 1/2)^2");
  for (double e : cfg.epsilons)
    if (!(e > 0.0)) throw std::invalid_argument("study: epsilons must be positive");
  for (double e : cfg.sigma2_epsilons)
    if (!(e > 0.0)) throw std::invalid_argument("study: sigma2_epsilons must be positive");
  check_optimizer_options(cfg.optimizer);
}

ReplicationRecord run_replication(const StudyConfig& cfg, int T, int rep) {
  ReplicationRecord r;
  r.T = T;
  r.rep = rep;
  r.seed = derive_seed(cfg.base_seed, static_cast<std::uint64_t>(T), static_cast<std::uint64_t>(rep));
  try {
    const SimConfig sim{with_theta(cfg.sim_model.value_or(cfg.ctx.model()), cfg.theta0), cfg.n_trunc, r.seed};
    const GridField field = simulate_field(T, sim);
    const EstimationResult est =
        cfg.adjusted ? mce_adjusted(field, cfg.ctx, cfg.optimizer) : mce(field, cfg.ctx, cfg.optimizer);
    r.theta_hat = est.theta_hat;
    r.sigma2_hat = est.sigma2_hat;
    r.converged = est.converged;
    r.boundary_flag = est.boundary_flag;
  } catch (const std::exception& e) {
    r.failed = true;
    r.error = e.what();
  }
  return r;
}

SizeSummary summarize(int T, std::vector<ReplicationRecord> records, const LrdParams& theta0,
                      const std::vector<double>& epsilons, const std::vector<double>& sigma2_epsilons,
                      double sigma2_reference) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.rep < b.rep; });
  SizeSummary s;
  s.T = T;
  std::vector<double> err, d1, d2, s2;
  for (const auto& r : records) {
    if (r.failed) {
      ++s.failures;
      continue;
    }
    if (!r.converged) ++s.nonconverged;
    if (r.boundary_flag) ++s.boundary_hits;
    err.push_back(theta_error(r.theta_hat, theta0));
    d1.push_back(r.theta_hat.d1);
    d2.push_back(r.theta_hat.d2);
    s2.push_back(r.sigma2_hat);
  }
  s.median_error = quantile(err, 0.5);
  s.d1_quantiles = quantiles(d1);
  s.d2_quantiles = quantiles(d2);
  s.sigma2_quantiles = quantiles(s2);
  const double n = static_cast<double>(records.size());
  for (double eps : epsilons)
    s.prob_theta.push_back(
        static_cast<double>(std::count_if(err.begin(), err.end(), [&](double e) { return e < eps; })) / n);
  for (double eps : sigma2_epsilons)
    s.prob_sigma2.push_back(static_cast<double>(std::count_if(s2.begin(), s2.end(), [&](double v) {
                              return std::abs(v - sigma2_reference) < eps;
                            })) /
                            n);
  s.records = std::move(records);
  return s;
}

ConsistencyReport run_consistency_study(const StudyConfig& cfg) {
  check_study_config(cfg);
  ConsistencyReport rep;
  rep.sigma2_reference = cfg.sigma2_reference.value_or(sigma2_of_theta(cfg.theta0, cfg.ctx));
  rep.epsilons = cfg.epsilons;
  rep.sigma2_epsilons = cfg.sigma2_epsilons;
  const auto all = run_jobs(cfg, cfg.T_values);
  const auto reps = static_cast<std::size_t>(cfg.replications);
  for (std::size_t i = 0; i < cfg.T_values.size(); ++i) {
    std::vector<ReplicationRecord> recs(all.begin() + static_cast<long>(i * reps),
                                        all.begin() + static_cast<long>((i + 1) * reps));
    rep.sizes.push_back(summarize(cfg.T_values[i], std::move(recs), cfg.theta0, cfg.epsilons,
                                  cfg.sigma2_epsilons, rep.sigma2_reference));
  }
  return rep;
}

MardiaResult mardia_test(const std::vector<Vec2>& x) {
  if (x.size() < 20) throw std::invalid_argument("mardia_test: at least 20 samples required");
  const double n = static_cast<double>(x.size());
  Vec2 mean{};
  for (const auto& v : x)
    for (std::size_t i = 0; i < 2; ++i) mean[i] += v[i] / n;
  Mat2 cov;
  for (const auto& v : x)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) cov(i, j) += (v[i] - mean[i]) * (v[j] - mean[j]) / n;
  if (!(cov.det() > 1e-12 * cov.trace() * cov.trace()))
    throw std::domain_error("mardia_test: sample covariance is singular");
  const Mat2 inv = cov.inverse();

  std::vector<Vec2> z(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const Vec2 c{x[k][0] - mean[0], x[k][1] - mean[1]};
    z[k] = {inv(0, 0) * c[0] + inv(0, 1) * c[1], inv(1, 0) * c[0] + inv(1, 1) * c[1]};
  }
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const Vec2 ca{x[a][0] - mean[0], x[a][1] - mean[1]};
    for (std::size_t b = 0; b < x.size(); ++b) {
      const double g = ca[0] * z[b][0] + ca[1] * z[b][1];
      b1 += g * g * g;
      if (a == b) b2 += g * g;
    }
  }
  b1 /= n * n;
  b2 /= n;

  MardiaResult r;
  r.skewness_stat = n * b1 / 6.0;
  // chi-square survival function for 4 degrees of freedom
  r.p_skew = std::exp(-0.5 * r.skewness_stat) * (1.0 + 0.5 * r.skewness_stat);
  r.kurtosis_stat = (b2 - 8.0) / std::sqrt(64.0 / n);
  r.p_kurt = std::erfc(std::abs(r.kurtosis_stat) / std::sqrt(2.0));
  return r;
}

std::vector<QQPoint> qq_data(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const boost::math::normal_distribution<double> standard;
  const double n = static_cast<double>(sample.size());
  std::vector<QQPoint> out(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double p = (static_cast<double>(i) + 1.0 - 0.375) / (n + 0.25);
    out[i] = {sample[i], boost::math::quantile(standard, p)};
  }
  return out;
}

double qq_correlation(const std::vector<QQPoint>& qq) {
  const double n = static_cast<double>(qq.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : qq) {
    mx += p.sample_quantile / n;
    my += p.normal_quantile / n;
  }
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& p : qq) {
    const double dx = p.sample_quantile - mx;
    const double dy = p.normal_quantile - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

NormalityReport run_normality_study(const StudyConfig& cfg_in) {
  StudyConfig cfg = cfg_in;
  check_study_config(cfg);
  cfg.adjusted = true;
  NormalityReport rep;
  rep.T = cfg.T_values.back();
  rep.records = run_jobs(cfg, {rep.T});
  const double T = rep.T;
  for (const auto& r : rep.records) {
    if (r.failed) {
      ++rep.failures;
      continue;
    }
    rep.scaled.push_back({T * (r.theta_hat.d1 - cfg.theta0.d1), T * (r.theta_hat.d2 - cfg.theta0.d2)});
  }
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<double> comp;
    for (const auto& v : rep.scaled) comp.push_back(v[c]);
    rep.qq[c] = qq_data(comp);
    rep.qq_corr[c] = comp.size() >= 2 ? qq_correlation(rep.qq[c]) : std::nan("");
  }
  if (!rep.scaled.empty()) {
    const double n = static_cast<double>(rep.scaled.size());
    Vec2 mean{};
    for (const auto& v : rep.scaled)
      for (std::size_t i = 0; i < 2; ++i) mean[i] += v[i] / n;
    for (const auto& v : rep.scaled)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          rep.empirical_cov(i, j) += (v[i] - mean[i]) * (v[j] - mean[j]) / std::max(1.0, n - 1.0);
  }
  try {
    rep.mardia = mardia_test(rep.scaled);
  } catch (const std::exception& e) {
    rep.mardia_error = e.what();
  }
  try {
    rep.reference = sandwich(cfg.theta0, cfg.ctx);
  } catch (const std::exception& e) {
    rep.reference_error = e.what();
  }
  return rep;
}

}  // namespace gmce
