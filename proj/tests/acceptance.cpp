// Acceptance suite: one PASS/FAIL line per criterion, with NOTE lines for
// diagnostics that are reported but not graded. Exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gmce/asymptotics.hpp"
#include "gmce/kernels.hpp"
#include "gmce/montecarlo.hpp"
#include "gmce/periodogram.hpp"
#include "gmce/reference.hpp"
#include "gmce/rng.hpp"
#include "gmce/simulate.hpp"
#include "oracles.hpp"

using namespace gmce;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSigma2Target = 74.736;
const LrdParams kTheta0{0.2, 0.3};

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void note(int id, const std::string& detail) {
  std::printf("NOTE %d: %s\n", id, detail.c_str());
  std::fflush(stdout);
}

std::string num(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string mat(const Mat2& m) {
  return "[[" + num(m(0, 0)) + ", " + num(m(0, 1)) + "], [" + num(m(1, 0)) + ", " + num(m(1, 1)) + "]]";
}

bool positive_definite(const Mat2& m) {
  const auto ev = m.symmetric_eigenvalues();
  return ev[0] > 0 && ev[1] > 0;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ContrastContext reference_context() { return ContrastContext::make(ModelParams{}, WeightConfig{}, 256); }

// Entrywise relative difference. An entry that is zero up to rounding (the
// off-diagonal of S under a separable weight) is measured against 1e-8 times
// the largest entry instead of its own size.
double max_rel_entry(const Mat2& a, const Mat2& b) {
  double scale = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) scale = std::max(scale, std::abs(b(i, j)));
  double m = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)) / std::max(std::abs(b(i, j)), 1e-8 * scale));
  return m;
}

// ---------------------------------------------------------------------------

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const ContrastContext ctx = reference_context();
  const double s = sigma2_of_theta(kTheta0, ctx);
  const double secs = seconds_since(t0);
  const double rel = std::abs(s - kSigma2Target) / kSigma2Target;
  report(1, rel <= 5e-3 && secs < 1.0,
         "sigma2(theta0) = " + num(s, 8) + ", target 74.736, relative difference " + num(rel, 3) + " (limit 0.005), " +
             num(secs, 3) + " s");
  const ContrastContext fine = ContrastContext::make(ModelParams{}, WeightConfig{}, 2048);
  note(1, "sigma2(theta0) on a 2048^2 grid = " + num(sigma2_of_theta(kTheta0, fine), 8) +
              "; node-by-node 2D sum on 256^2 = " + num(sigma2_of_theta_2d(kTheta0, ctx), 8));
}

void criterion2() {
  const ModelParams p{};
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> U(-kPi, kPi);
  double worst_g = 0.0, worst_h = 0.0;
  int tested = 0;
  while (tested < 100) {
    const Frequency l{U(gen), U(gen)};
    if (std::abs(std::abs(l.lambda1) - p.nu1()) < 1e-3 || std::abs(std::abs(l.lambda2) - p.nu2()) < 1e-3) continue;
    ++tested;
    const auto f = [&](const LrdParams& t) { return spectral_density(l, with_theta(p, t)); };
    const Vec2 g = spectral_density_grad(l, p);
    const Vec2 gfd = oracle::fd_gradient(f, kTheta0, 1e-6);
    const Mat2 H = spectral_density_hess(l, p);
    const Mat2 Hfd = oracle::fd_hessian(f, kTheta0, 1e-4);
    // relative to the largest entry, so a component that vanishes at unit
    // distance does not divide by zero
    const double gs = std::max(std::abs(g[0]), std::abs(g[1]));
    worst_g = std::max({worst_g, std::abs(g[0] - gfd[0]) / gs, std::abs(g[1] - gfd[1]) / gs});
    double hs = 0.0;
    for (std::size_t i = 0; i < 4; ++i) hs = std::max(hs, std::abs(H.m[i / 2][i % 2]));
    for (std::size_t i = 0; i < 4; ++i) worst_h = std::max(worst_h, std::abs(H.m[i / 2][i % 2] - Hfd.m[i / 2][i % 2]) / hs);
  }
  const ContrastContext ctx = reference_context();
  const Vec2 sg = sigma2_derivatives(kTheta0, ctx).grad;
  const Vec2 sfd = oracle::fd_gradient([&](const LrdParams& t) { return sigma2_of_theta(t, ctx); }, kTheta0, 1e-6);
  const double worst_s = std::max(std::abs(sg[0] - sfd[0]) / std::abs(sfd[0]), std::abs(sg[1] - sfd[1]) / std::abs(sfd[1]));
  report(2, worst_g <= 1e-5 && worst_h <= 1e-5 && worst_s <= 1e-4,
         "max relative error: gradient " + num(worst_g, 3) + ", Hessian " + num(worst_h, 3) + " (limit 1e-5); sigma2 gradient " +
             num(worst_s, 3) + " (limit 1e-4)");
}

void criterion3() {
  const ContrastContext ctx = reference_context();
  const QuadratureGrid& q = ctx.quad();
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(0.01, 0.49);
  double worst_int = 0.0, worst_grad = 0.0;
  for (int k = 0; k < 20; ++k) {
    const LrdParams t{U(gen), U(gen)};
    const ModelParams m = with_theta(ctx.model(), t);
    // integral of Psi w from spectral_density and weight directly
    double s = 0.0;
    for (std::size_t a = 0; a < q.rows(); ++a)
      for (std::size_t b = 0; b < q.cols(); ++b) {
        const Frequency x = q.node(a, b);
        s += q.weight(a, b) * spectral_density(x, m) * weight(x, ctx);
      }
    worst_int = std::max(worst_int, std::abs(s / sigma2_of_theta(t, ctx) - 1.0));
    const Vec2 r = check_condition_A4(t, ctx);
    worst_grad = std::max({worst_grad, std::abs(r[0]), std::abs(r[1])});
  }
  report(3, worst_int <= 1e-6 && worst_grad <= 1e-5,
         "max |int Psi w - 1| = " + num(worst_int, 3) + " (limit 1e-6), max |int grad Psi w| = " + num(worst_grad, 3) +
             " (limit 1e-5) over 20 random theta");
}

void criterion4() {
  const ContrastContext ctx = reference_context();
  const int n = 50;
  const double h = 0.5 / n;
  double min_k = 1e300, min_val = 1e300;
  LrdParams arg{};
  std::vector<double> vals;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const LrdParams t{(i + 0.5) * h, (j + 0.5) * h};
      const double k = contrast_K(kTheta0, t, ctx);
      vals.push_back(k);
      min_k = std::min(min_k, k);
      if (k < min_val) {
        min_val = k;
        arg = t;
      }
    }
  int ties = 0;
  for (double v : vals) ties += v <= min_val + 1e-14 * (1 + std::abs(min_val));
  const bool near = std::abs(arg.d1 - kTheta0.d1) <= h && std::abs(arg.d2 - kTheta0.d2) <= h;
  report(4, min_k >= -1e-10 && near && ties == 1,
         "min K = " + num(min_k, 3) + " on a 50x50 scan, argmin (" + num(arg.d1, 4) + ", " + num(arg.d2, 4) +
             ") with cell width " + num(h, 3) + ", " + std::to_string(ties) + " point(s) at the minimum");
}

void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const ContrastContext ctx = reference_context();
  std::vector<LrdParams> thetas{kTheta0};
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(0.05, 0.24);
  for (int k = 0; k < 5; ++k) thetas.push_back({U(gen), U(gen)});
  double worst_s = 0.0, worst_a = 0.0;
  bool all_pd = true;
  for (const LrdParams& t : thetas) {
    const Mat2 S = matrix_S(t, ctx);
    const Mat2 A = matrix_A(t, ctx);
    worst_s = std::max(worst_s, max_rel_entry(matrix_S_reduced(t, ctx, ReducedAlgebra::original), S));
    worst_a = std::max(worst_a, max_rel_entry(matrix_A_decomposition(t, ctx, ReducedAlgebra::original), A));
    all_pd = all_pd && positive_definite(S) && positive_definite(A);
  }
  const double secs = seconds_since(t0);
  report(5, worst_s <= 1e-4 && worst_a <= 1e-4 && all_pd && secs < 10.0,
         "original reduced forms vs integrals, max relative difference: s_ij " + num(worst_s, 3) + ", a_ij " + num(worst_a, 3) +
             " (limit 1e-4); S and A positive definite at all 6 theta: " + (all_pd ? "yes" : "no") + "; " + num(secs, 3) + " s");
  double re_s = 0.0, re_a = 0.0, psi_a = 0.0;
  int s_pd = 0, a_pd = 0;
  for (const LrdParams& t : thetas) {
    const Mat2 S = matrix_S(t, ctx);
    const Mat2 A = matrix_A(t, ctx);
    re_s = std::max(re_s, max_rel_entry(matrix_S_reduced(t, ctx, ReducedAlgebra::rederived), S));
    re_a = std::max(re_a, max_rel_entry(matrix_A_decomposition(t, ctx, ReducedAlgebra::rederived), A));
    psi_a = std::max(psi_a, max_rel_entry(matrix_A_psi_form(t, ctx), A));
    s_pd += positive_definite(S);
    a_pd += positive_definite(A);
  }
  note(5, "rederived reduced forms vs integrals: s_ij " + num(re_s, 3) + ", a_ij " + num(re_a, 3) + "; Psi form of a_ij " +
              num(psi_a, 3) + "; S positive definite at " + std::to_string(s_pd) + "/6, A at " + std::to_string(a_pd) + "/6");
  note(5, "at theta0: S = " + mat(matrix_S(kTheta0, ctx)) + ", original reduced s_ij = " +
              mat(matrix_S_reduced(kTheta0, ctx, ReducedAlgebra::original)));
  note(5, "at theta0: A = " + mat(matrix_A(kTheta0, ctx)) + ", original decomposition = " +
              mat(matrix_A_decomposition(kTheta0, ctx, ReducedAlgebra::original)));
}

StudyConfig reference_study() {
  StudyConfig c(reference_context());
  c.sigma2_reference = kSigma2Target;
  return c;
}

void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const ConsistencyReport r = run_consistency_study(reference_study());
  const double secs = seconds_since(t0);
  int inversions = 0;
  std::string medians;
  for (std::size_t i = 0; i < r.sizes.size(); ++i) {
    if (i > 0 && r.sizes[i].median_error > r.sizes[i - 1].median_error) ++inversions;
    medians += (i ? ", " : "") + num(r.sizes[i].median_error, 4);
  }
  // epsilons {0.025, 0.05, 0.1, 0.2}: index 2 is 0.1; sigma2 epsilons index 3 is 20
  const SizeSummary& first = r.sizes.front();
  const SizeSummary& last = r.sizes.back();
  const bool theta_up = last.prob_theta[2] > first.prob_theta[2];
  const bool sigma_up = last.prob_sigma2[3] > first.prob_sigma2[3];
  report(6, inversions <= 1 && theta_up && sigma_up && secs < 900.0,
         "median |theta_hat - theta0| over T = 10..50: " + medians + " (" + std::to_string(inversions) +
             " inversion(s)); P(err < 0.1) " + num(first.prob_theta[2], 3) + " -> " + num(last.prob_theta[2], 3) +
             "; P(|sigma2_hat - 74.736| < 20) " + num(first.prob_sigma2[3], 3) + " -> " + num(last.prob_sigma2[3], 3) +
             "; " + num(secs, 3) + " s");
  int failed = 0, boundary = 0;
  for (const auto& s : r.sizes) {
    failed += s.failures;
    boundary += s.boundary_hits;
  }
  note(6, "failed replications " + std::to_string(failed) + ", boundary hits " + std::to_string(boundary) +
              ", median sigma2_hat at T=50 " + num(last.sigma2_quantiles[2], 5));
}

void criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  StudyConfig c = reference_study();
  c.T_values = {50};
  const NormalityReport r = run_normality_study(c);
  const double secs = seconds_since(t0);
  const bool mardia_ok = r.mardia && r.mardia->p_skew > 0.01 && r.mardia->p_kurt > 0.01;
  const bool qq_ok = r.qq_corr[0] >= 0.98 && r.qq_corr[1] >= 0.98;
  std::string m = r.mardia ? "Mardia p_skew " + num(r.mardia->p_skew, 4) + ", p_kurt " + num(r.mardia->p_kurt, 4)
                           : "Mardia unavailable: " + r.mardia_error;
  report(7, mardia_ok && qq_ok && secs < 600.0,
         m + " (limit > 0.01); Q-Q correlation " + num(r.qq_corr[0], 4) + ", " + num(r.qq_corr[1], 4) +
             " (limit >= 0.98); " + std::to_string(r.scaled.size()) + " samples of T(theta*_50 - theta0); " +
             num(secs, 3) + " s");
  double m1 = 0.0, m2 = 0.0, s2 = 0.0;
  int boundary = 0;
  std::vector<double> sig;
  for (const auto& rec : r.records) {
    if (rec.failed) continue;
    m1 += rec.theta_hat.d1;
    m2 += rec.theta_hat.d2;
    s2 += rec.sigma2_hat;
    boundary += rec.boundary_flag;
  }
  const double n = static_cast<double>(r.scaled.size());
  note(7, "mean theta*_50 = (" + num(m1 / n, 4) + ", " + num(m2 / n, 4) + "), mean sigma2* = " + num(s2 / n, 5) +
              ", boundary hits " + std::to_string(boundary) + ", failures " + std::to_string(r.failures));
  note(7, "Monte Carlo covariance of T(theta* - theta0) = " + mat(r.empirical_cov));
  if (r.reference) note(7, "sandwich S^-1 A S^-1 at theta0 = " + mat(r.reference->cov));
}

void criterion8() {
  double worst_sim = 0.0, worst_pg = 0.0, worst_unb = 0.0, worst_parseval = 0.0;
  const ModelParams p{};
  for (int T = 2; T <= 8; ++T) {
    const int N = 12;
    const SimConfig cfg{p, N, static_cast<std::uint64_t>(800 + T)};
    const GridField f = simulate_field(T, cfg);
    const Matrix noise = white_noise_grid(T + N + 1, T + N + 1, p.sigma2_eps, cfg.seed);
    const auto c1 = gegenbauer_coeffs(N, p.d1, p.u1);
    const auto c2 = gegenbauer_coeffs(N, p.d2, p.u2);
    double scale = 0.0;
    for (int t1 = 0; t1 <= T; ++t1)
      for (int t2 = 0; t2 <= T; ++t2) {
        double s = 0.0;
        for (int n1 = 0; n1 <= N; ++n1)
          for (int n2 = 0; n2 <= N; ++n2) s += c1[n1] * c2[n2] * noise(t1 + N - n1, t2 + N - n2);
        worst_sim = std::max(worst_sim, std::abs(f(t1, t2) - s));
        scale = std::max(scale, std::abs(s));
      }
    for (const std::size_t M : {std::size_t{16}, std::size_t{17}}) {
      const AxisRule r = midpoint_axis(M, 3.0);
      const FrequencyGrid g{r.nodes, r.nodes};
      const PeriodogramGrid I = periodogram(f, g);
      const PeriodogramGrid Is = unbiased_periodogram(f, g, false);
      double riemann = 0.0;
      for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = 0; b < M; ++b) {
          worst_pg = std::max(worst_pg, std::abs(I.values(a, b) - oracle::periodogram_direct(f.values, T, g.freqs1[a], g.freqs2[b])));
          worst_unb = std::max(
              worst_unb, std::abs(Is.values(a, b) - oracle::unbiased_periodogram_direct(f.values, T, g.freqs1[a], g.freqs2[b]).real()));
          riemann += I.values(a, b);
        }
      riemann *= std::pow(2 * kPi / static_cast<double>(M), 2);
      double energy = 0.0;
      for (double v : f.values.data()) energy += v * v;
      energy /= static_cast<double>(T) * T;
      worst_parseval = std::max(worst_parseval, std::abs(riemann - energy) / energy);
    }
  }
  report(8, worst_sim <= 1e-10 && worst_pg <= 1e-10 && worst_unb <= 1e-10 && worst_parseval <= 1e-10,
         "max abs difference vs direct sums for T = 2..8: simulation " + num(worst_sim, 3) + ", periodogram " +
             num(worst_pg, 3) + ", unbiased periodogram " + num(worst_unb, 3) + " (limit 1e-10); Parseval relative error " +
             num(worst_parseval, 3));
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gmce");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Runs every subcommand into `dir` and returns the concatenated outputs.
std::string pipeline(const fs::path& dir, const std::string& threads, const std::string& config) {
  fs::create_directories(dir);
  const std::string d = dir.string();
  const std::vector<std::string> base{"--threads", threads};
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), base.begin(), base.end());
    return cli(args);
  };
  std::string all;
  run({"simulate", "-c", config, "-o", d + "/field.csv"});
  run({"spectrum", "-c", config, "-f", d + "/field.csv", "-o", d + "/pgram.csv"});
  run({"spectrum", "-c", config, "-f", d + "/field.csv", "--unbiased", "-o", d + "/upgram.csv"});
  all += run({"estimate", "-c", config, "-f", d + "/field.csv"}).out;
  all += run({"estimate", "-c", config, "-f", d + "/field.csv", "--adjusted"}).out;
  all += run({"asymptotics", "-c", config}).out;
  run({"mc-consistency", "-c", config, "--out-dir", d + "/mcc"});
  run({"mc-normality", "-c", config, "--out-dir", d + "/mcn"});
  for (const char* f : {"field.csv", "field.json", "pgram.csv", "pgram.json", "upgram.csv", "upgram.json",
                        "mcc/report.json", "mcc/estimates.csv", "mcn/report.json", "mcn/estimates.csv", "mcn/qq.csv"})
    all += std::string(f) + "\n" + slurp(dir / f);
  return all;
}

void criterion9() {
  const fs::path root = fs::temp_directory_path() / "gmce_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path config = root / "run.yaml";
  std::ofstream(config) << "simulation:\n  T: 24\n  seed: 11\nstudy:\n  T_values: [10, 24]\n  replications: 24\n";
  const std::string a = pipeline(root / "a", "1", config.string());
  const std::string b = pipeline(root / "b", "1", config.string());
  const std::string c = pipeline(root / "c", "4", config.string());
  const std::string d = pipeline(root / "d", "0", config.string());
  fs::remove_all(root);
  const bool same = a == b && a == c && a == d;
  report(9, same && a.size() > 10000,
         "full pipeline (simulate, spectrum, estimate, asymptotics, both studies) byte-identical across repeated runs "
         "with --threads 1, 4 and default: " +
             std::string(same ? "yes" : "no") + " (" + std::to_string(a.size()) + " bytes compared)");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
