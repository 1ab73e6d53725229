#include "gmce/periodogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gmce/kernels.hpp"

namespace gmce {

namespace {

constexpr double kPi = std::numbers::pi;

void check_axis(const std::vector<double>& f, const char* name) {
  if (f.empty()) throw std::invalid_argument(std::string("frequency axis ") + name + " is empty");
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!(f[k] >= -kPi && f[k] <= kPi))
      throw std::invalid_argument(std::string("frequency outside [-pi, pi] on axis ") + name);
    if (k > 0 && f[k] < f[k - 1]) throw std::invalid_argument(std::string("frequency axis ") + name + " not sorted");
  }
}

bool is_fourier_spaced(const std::vector<double>& f) {
  const double h = 2.0 * kPi / static_cast<double>(f.size());
  for (std::size_t k = 1; k < f.size(); ++k)
    if (std::abs(f[k] - f[k - 1] - h) > 1e-12) return false;
  return true;
}

kernels::ComplexGrid fourier_sum(const Matrix& data, int origin, const FrequencyGrid& freqs) {
  if (is_fourier_spaced(freqs.freqs1) && is_fourier_spaced(freqs.freqs2)) {
    return kernels::uniform_dft2(data, origin, origin, freqs.freqs1.front(), freqs.freqs2.front(),
                                 freqs.freqs1.size(), freqs.freqs2.size());
  }
  return kernels::separable_dft2(data, origin, origin, freqs.freqs1, freqs.freqs2);
}

}  // namespace

FrequencyGrid frequency_grid(const QuadratureGrid& quad) {
  return {quad.axis1().nodes, quad.axis2().nodes};
}

PeriodogramGrid periodogram(const GridField& field, const FrequencyGrid& freqs) {
  if (field.size_T < 1) throw std::invalid_argument("periodogram: T must be >= 1");
  check_axis(freqs.freqs1, "1");
  check_axis(freqs.freqs2, "2");
  const auto sums = fourier_sum(field.values, 0, freqs);
  const double norm = 1.0 / std::pow(2.0 * kPi * field.size_T, 2);
  PeriodogramGrid out{freqs.freqs1, freqs.freqs2, Matrix(freqs.freqs1.size(), freqs.freqs2.size())};
  auto data = out.values.data();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = std::norm(sums[i]) * norm;
  return out;
}

double sample_autocov(const GridField& field, const Lag& lag) {
  const int T = field.size_T;
  const int a = std::abs(lag.j1);
  const int b = std::abs(lag.j2);
  if (a > T - 1 || b > T - 1) throw std::invalid_argument("sample_autocov: lag out of range");
  double s = 0.0;
  for (int k = 0; k <= T - a; ++k)
    for (int l = 0; l <= T - b; ++l) s += field(k, l) * field(a + k, b + l);
  return s / (static_cast<double>(T - a) * static_cast<double>(T - b));
}

LagCovTable lag_cov_table(const GridField& field) {
  const int T = field.size_T;
  if (T < 2) throw std::invalid_argument("lag_cov_table: T must be >= 2");
  const Matrix prod = kernels::lag_products(field.values, static_cast<std::size_t>(T - 1));
  const auto side = static_cast<std::size_t>(2 * T - 1);
  LagCovTable table{T, Matrix(side, side)};
  for (int j1 = 1 - T; j1 <= T - 1; ++j1)
    for (int j2 = 1 - T; j2 <= T - 1; ++j2) {
      const int a = std::abs(j1);
      const int b = std::abs(j2);
      table.values(static_cast<std::size_t>(j1 + T - 1), static_cast<std::size_t>(j2 + T - 1)) =
          prod(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) /
          (static_cast<double>(T - a) * static_cast<double>(T - b));
    }
  return table;
}

PeriodogramGrid unbiased_periodogram(const LagCovTable& table, const FrequencyGrid& freqs, bool clamp_at_zero,
                                     double* max_imag_part) {
  check_axis(freqs.freqs1, "1");
  check_axis(freqs.freqs2, "2");
  const auto sums = fourier_sum(table.values, 1 - table.size_T, freqs);
  const double norm = 1.0 / (4.0 * kPi * kPi);
  PeriodogramGrid out{freqs.freqs1, freqs.freqs2, Matrix(freqs.freqs1.size(), freqs.freqs2.size())};
  auto data = out.values.data();
  double max_imag = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    max_imag = std::max(max_imag, std::abs(sums[i].imag()) * norm);
    const double v = sums[i].real() * norm;
    data[i] = (clamp_at_zero && v < 0.0) ? 0.0 : v;
  }
  if (max_imag_part) *max_imag_part = max_imag;
  return out;
}

PeriodogramGrid unbiased_periodogram(const GridField& field, const FrequencyGrid& freqs, bool clamp_at_zero,
                                     double* max_imag_part) {
  return unbiased_periodogram(lag_cov_table(field), freqs, clamp_at_zero, max_imag_part);
}

}  // namespace gmce
