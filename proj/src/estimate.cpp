#include "gmce/estimate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gmce {

namespace {

struct Vertex {
  LrdParams x;
  double f = std::numeric_limits<double>::infinity();
};

class Probe {
 public:
  Probe(const Objective& obj, EstimationResult& res) : obj_(obj), res_(res) {}

  double operator()(const LrdParams& x) {
    ++res_.evaluations;
    const double v = obj_(x);
    if (std::isfinite(v)) return v;
    if (!warned_) {
      res_.warnings.push_back("objective non-finite at (" + std::to_string(x.d1) + ", " + std::to_string(x.d2) +
                              "); point discarded");
      warned_ = true;
    }
    return std::numeric_limits<double>::infinity();
  }

 private:
  const Objective& obj_;
  EstimationResult& res_;
  bool warned_ = false;
};

}  // namespace

void check_optimizer_options(const OptimizerOptions& o) {
  if (o.coarse_grid_n < 2) throw std::invalid_argument("optimizer: coarse_grid_n must be >= 2");
  if (!(o.tol_x > 0.0) || !(o.tol_f > 0.0)) throw std::invalid_argument("optimizer: tolerances must be positive");
  if (o.max_evals < 1) throw std::invalid_argument("optimizer: max_evals must be >= 1");
  if (!(o.clip_margin > 0.0 && o.clip_margin < 0.25))
    throw std::invalid_argument("optimizer: clip_margin must lie in (0, 1/4)");
}

EstimationResult minimize_contrast(const Objective& objective, const OptimizerOptions& opts) {
  check_optimizer_options(opts);
  EstimationResult res;
  Probe probe(objective, res);
  const double lo = opts.clip_margin;
  const double hi = 0.5 - opts.clip_margin;
  auto clip = [&](LrdParams x) {
    x.d1 = std::clamp(x.d1, lo, hi);
    x.d2 = std::clamp(x.d2, lo, hi);
    return x;
  };

  const int n = opts.coarse_grid_n;
  const double step = (hi - lo) / (n - 1);
  Vertex best;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const LrdParams x{lo + i * step, lo + j * step};
      const double f = probe(x);
      if (f < best.f) best = {x, f};
    }
  if (!std::isfinite(best.f)) throw std::runtime_error("minimize_contrast: objective non-finite at every grid point");

  auto offset = [&](const LrdParams& base, std::size_t axis) {
    LrdParams x = base;
    double& c = axis == 0 ? x.d1 : x.d2;
    c = (c + step <= hi) ? c + step : c - step;
    return x;
  };
  std::array<Vertex, 3> s{best, Vertex{offset(best.x, 0)}, Vertex{offset(best.x, 1)}};
  s[1].f = probe(s[1].x);
  s[2].f = probe(s[2].x);

  auto combine = [&](const LrdParams& a, const LrdParams& b, double t) {
    return clip({a.d1 + t * (b.d1 - a.d1), a.d2 + t * (b.d2 - a.d2)});
  };

  while (true) {
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    double size = 0.0;
    for (std::size_t i = 1; i < 3; ++i)
      size = std::max({size, std::abs(s[i].x.d1 - s[0].x.d1), std::abs(s[i].x.d2 - s[0].x.d2)});
    const double spread = s[2].f - s[0].f;
    if (size <= opts.tol_x && spread <= opts.tol_f * std::max(1.0, std::abs(s[0].f))) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= opts.max_evals) break;

    const LrdParams centroid{0.5 * (s[0].x.d1 + s[1].x.d1), 0.5 * (s[0].x.d2 + s[1].x.d2)};
    const LrdParams xr = combine(centroid, s[2].x, -1.0);
    const double fr = probe(xr);
    if (fr < s[0].f) {
      const LrdParams xe = combine(centroid, s[2].x, -2.0);
      const double fe = probe(xe);
      s[2] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
      continue;
    }
    if (fr < s[1].f) {
      s[2] = {xr, fr};
      continue;
    }
    const bool outside = fr < s[2].f;
    const LrdParams xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, s[2].x, 0.5);
    const double fc = probe(xc);
    if (fc < std::min(fr, s[2].f)) {
      s[2] = {xc, fc};
      continue;
    }
    for (std::size_t i = 1; i < 3; ++i) {
      s[i].x = combine(s[0].x, s[i].x, 0.5);
      s[i].f = probe(s[i].x);
    }
  }

  res.theta_hat = s[0].x;
  res.objective_value = s[0].f;
  const double margin = 2.0 * opts.clip_margin;
  res.boundary_flag = res.theta_hat.d1 - lo < margin || hi - res.theta_hat.d1 < margin ||
                      res.theta_hat.d2 - lo < margin || hi - res.theta_hat.d2 < margin;
  if (!res.converged) res.warnings.push_back("evaluation budget exhausted before convergence");
  if (res.boundary_flag) res.warnings.push_back("estimate within 2*clip_margin of the parameter box edge");
  return res;
}

EstimationResult estimate_from_periodogram(const PeriodogramGrid& pgram, const ContrastContext& ctx,
                                           const OptimizerOptions& opts) {
  const ContrastObjective objective(pgram, ctx);
  if (!(objective.sigma2_hat() > 0.0))
    throw std::domain_error("periodogram integrates to zero against the weight; contrast is constant in theta");
  EstimationResult res = minimize_contrast([&](const LrdParams& t) { return objective(t); }, opts);
  res.sigma2_hat = objective.sigma2_hat();
  return res;
}

EstimationResult mce(const GridField& field, const ContrastContext& ctx, const OptimizerOptions& opts) {
  if (field.size_T < 2) throw std::invalid_argument("mce: T must be >= 2");
  return estimate_from_periodogram(periodogram(field, frequency_grid(ctx.quad())), ctx, opts);
}

EstimationResult mce_adjusted(const GridField& field, const ContrastContext& ctx, const OptimizerOptions& opts) {
  if (field.size_T < 2) throw std::invalid_argument("mce_adjusted: T must be >= 2");
  return estimate_from_periodogram(unbiased_periodogram(field, frequency_grid(ctx.quad()), true), ctx, opts);
}

}  // namespace gmce
