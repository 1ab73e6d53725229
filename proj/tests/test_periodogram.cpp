#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gmce/periodogram.hpp"
#include "gmce/quadrature.hpp"
#include "gmce/rng.hpp"
#include "gmce/simulate.hpp"
#include "oracles.hpp"

using namespace gmce;

namespace {

constexpr double kPi = std::numbers::pi;

GridField random_field(int T, std::uint64_t seed) {
  return GridField(T, white_noise_grid(static_cast<std::size_t>(T) + 1, static_cast<std::size_t>(T) + 1, 1.0, seed));
}

FrequencyGrid midpoints(std::size_t n) {
  const AxisRule r = midpoint_axis(n, 3.0);
  return {r.nodes, r.nodes};
}

FrequencyGrid irregular() {
  return {{-3.0, -1.1, -0.2, 0.05, 0.9, 2.5, kPi}, {-kPi, -2.0, 0.0, 0.3, 1.7}};
}

}  // namespace

TEST(Periodogram, ZeroAndSingleEntry) {
  const int T = 6;
  const GridField zero(T, Matrix(7, 7));
  const PeriodogramGrid pz = periodogram(zero, midpoints(32));
  for (double v : pz.values.data()) EXPECT_EQ(v, 0.0);
  Matrix m(7, 7);
  m(0, 0) = 1.0;
  const double expected = 1.0 / std::pow(2 * kPi * T, 2);
  for (const auto& g : {midpoints(32), irregular()}) {
    const PeriodogramGrid p = periodogram(GridField(T, m), g);
    for (double v : p.values.data()) EXPECT_NEAR(v, expected, 1e-15);
  }
}

TEST(Periodogram, FftAndDirectPathsMatchOracle) {
  for (int T : {1, 3, 8}) {
    const GridField f = random_field(T, 100 + T);
    for (const auto& g : {midpoints(16), irregular()}) {
      const PeriodogramGrid p = periodogram(f, g);
      for (std::size_t k = 0; k < g.freqs1.size(); ++k)
        for (std::size_t l = 0; l < g.freqs2.size(); ++l)
          EXPECT_NEAR(p.values(k, l), oracle::periodogram_direct(f.values, T, g.freqs1[k], g.freqs2[l]), 1e-10);
    }
  }
}

TEST(Periodogram, NonnegativeAndEven) {
  const GridField f = random_field(9, 5);
  const PeriodogramGrid p = periodogram(f, midpoints(64));
  for (std::size_t k = 0; k < 64; ++k)
    for (std::size_t l = 0; l < 64; ++l) {
      EXPECT_GE(p.values(k, l), 0.0);
      EXPECT_NEAR(p.values(k, l), p.values(63 - k, 63 - l), 1e-12 * (1 + p.values(k, l)));
    }
}

TEST(Periodogram, Parseval) {
  // integral of I_T over [-pi, pi]^2 = (1/T^2) sum Y^2; the midpoint rule on an
  // n-point grid with n > 2T is exact for trigonometric polynomials of this degree
  const int T = 10;
  const GridField f = random_field(T, 6);
  double energy = 0.0;
  for (double v : f.values.data()) energy += v * v;
  const std::size_t n = 64;
  const PeriodogramGrid p = periodogram(f, midpoints(n));
  double riemann = 0.0;
  for (double v : p.values.data()) riemann += v;
  riemann *= std::pow(2 * kPi / n, 2);
  EXPECT_NEAR(riemann, energy / (T * T), 1e-10 * energy);
}

TEST(Periodogram, RejectsBadFrequencies) {
  const GridField f = random_field(3, 1);
  EXPECT_THROW(periodogram(f, {{0.0, 4.0}, {0.0}}), std::invalid_argument);
  EXPECT_THROW(periodogram(f, {{1.0, 0.0}, {0.0}}), std::invalid_argument);
}

TEST(SampleAutocov, ConstantAndZeroField) {
  const int T = 5;
  const double c = 1.7;
  const GridField k(T, Matrix(6, 6, c));
  const GridField z(T, Matrix(6, 6));
  for (int a = 1 - T; a <= T - 1; ++a)
    for (int b = 1 - T; b <= T - 1; ++b) {
      const double A = std::abs(a), B = std::abs(b);
      EXPECT_NEAR(sample_autocov(k, {a, b}), c * c * (T - A + 1) * (T - B + 1) / ((T - A) * (T - B)), 1e-12);
      EXPECT_EQ(sample_autocov(z, {a, b}), 0.0);
    }
  EXPECT_THROW(sample_autocov(k, {T, 0}), std::invalid_argument);
}

TEST(LagCovTable, MatchesSampleAutocov) {
  const int T = 5;
  const GridField f = random_field(T, 8);
  const LagCovTable t = lag_cov_table(f);
  EXPECT_EQ(t.values.rows(), 9u);
  for (int a = 1 - T; a <= T - 1; ++a)
    for (int b = 1 - T; b <= T - 1; ++b) {
      EXPECT_NEAR(t.at(a, b), sample_autocov(f, {a, b}), 1e-12);
      EXPECT_NEAR(t.at(a, b), oracle::autocov_direct(f.values, T, a, b), 1e-12);
      EXPECT_EQ(t.at(a, b), t.at(-a, -b));
    }
  EXPECT_GE(t.at(0, 0), 0.0);
  EXPECT_THROW(lag_cov_table(random_field(1, 1)), std::invalid_argument);
}

TEST(SampleAutocov, UnbiasedOverReplications) {
  // E[gamma_hat(j)] = (T-|j1|+1)(T-|j2|+1)/((T-|j1|)(T-|j2|)) gamma(j) for the
  // simulated field, whose covariance is the truncated-MA one
  const ModelParams p{};
  const int T = 30, R = 500;
  for (const Lag j : {Lag{1, 0}, Lag{2, 1}}) {
    double s = 0.0, s2 = 0.0;
    for (int r = 0; r < R; ++r) {
      const double g = sample_autocov(simulate_field(T, {p, 40, derive_seed(31, 0, r)}), j);
      s += g;
      s2 += g * g;
    }
    const double m = s / R;
    const double se = std::sqrt((s2 / R - m * m) / (R - 1));
    const double A = std::abs(j.j1), B = std::abs(j.j2);
    const double expected = autocov_truncated_ma(j, p, 40) * (T - A + 1) * (T - B + 1) / ((T - A) * (T - B));
    EXPECT_LE(std::abs(m - expected), 3.0 * se);
  }
}

TEST(UnbiasedPeriodogram, MatchesDirectSum) {
  for (int T : {2, 3, 8}) {
    const GridField f = random_field(T, 200 + T);
    for (const auto& g : {midpoints(16), irregular()}) {
      double max_imag = 1.0;
      const PeriodogramGrid p = unbiased_periodogram(f, g, false, &max_imag);
      EXPECT_LE(max_imag, 1e-10);
      for (std::size_t k = 0; k < g.freqs1.size(); ++k)
        for (std::size_t l = 0; l < g.freqs2.size(); ++l) {
          const auto d = oracle::unbiased_periodogram_direct(f.values, T, g.freqs1[k], g.freqs2[l]);
          EXPECT_NEAR(p.values(k, l), d.real(), 1e-10);
          EXPECT_LE(std::abs(d.imag()), 1e-10);
        }
    }
  }
}

TEST(UnbiasedPeriodogram, ZeroFieldAndClamp) {
  const PeriodogramGrid z = unbiased_periodogram(GridField(4, Matrix(5, 5)), midpoints(16), true);
  for (double v : z.values.data()) EXPECT_EQ(v, 0.0);
  const GridField f = random_field(8, 3);
  const PeriodogramGrid raw = unbiased_periodogram(f, midpoints(32), false);
  const PeriodogramGrid cl = unbiased_periodogram(f, midpoints(32), true);
  bool any_negative = false;
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    any_negative |= raw.values.data()[i] < 0;
    EXPECT_EQ(cl.values.data()[i], std::max(0.0, raw.values.data()[i]));
  }
  EXPECT_TRUE(any_negative);
  for (std::size_t k = 0; k < 32; ++k)
    for (std::size_t l = 0; l < 32; ++l) EXPECT_NEAR(raw.values(k, l), raw.values(31 - k, 31 - l), 1e-12);
}
