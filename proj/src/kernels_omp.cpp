#include "gmce/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace gmce::kernels {

namespace {

// FFTW's planner is not thread-safe; execution of a finished plan is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

std::size_t wrap(long t, std::size_t n) {
  const long m = static_cast<long>(n);
  long r = t % m;
  if (r < 0) r += m;
  return static_cast<std::size_t>(r);
}

std::vector<std::complex<double>> phases(std::size_t count, int origin, double freq) {
  std::vector<std::complex<double>> p(count);
  for (std::size_t r = 0; r < count; ++r) {
    const double t = static_cast<double>(static_cast<long>(r) + origin);
    p[r] = std::polar(1.0, -freq * t);
  }
  return p;
}

}  // namespace

Matrix separable_filter(const Matrix& input, std::span<const double> c1, std::span<const double> c2) {
  if (c1.empty() || c2.empty()) throw std::invalid_argument("separable_filter: empty coefficient sequence");
  const std::size_t n1 = c1.size() - 1;
  const std::size_t n2 = c2.size() - 1;
  if (input.rows() <= n1 || input.cols() <= n2)
    throw std::invalid_argument("separable_filter: input smaller than filter support");
  const std::size_t out_rows = input.rows() - n1;
  const std::size_t out_cols = input.cols() - n2;

  Matrix tmp(input.rows(), out_cols);
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < input.rows(); ++r) {
    for (std::size_t t2 = 0; t2 < out_cols; ++t2) {
      double s = 0.0;
      for (std::size_t k = 0; k <= n2; ++k) s += c2[k] * input(r, t2 + n2 - k);
      tmp(r, t2) = s;
    }
  }

  Matrix out(out_rows, out_cols);
#pragma omp parallel for schedule(static)
  for (std::size_t t1 = 0; t1 < out_rows; ++t1) {
    for (std::size_t k = 0; k <= n1; ++k) {
      const double c = c1[k];
      const auto src = tmp.row(t1 + n1 - k);
      auto dst = out.row(t1);
      for (std::size_t t2 = 0; t2 < out_cols; ++t2) dst[t2] += c * src[t2];
    }
  }
  return out;
}

double tensor_integrate(const QuadratureGrid& quad, const Matrix& values) {
  if (values.rows() != quad.rows() || values.cols() != quad.cols())
    throw std::invalid_argument("tensor_integrate: value matrix does not match the grid");
  const auto& q1 = quad.axis1().weights;
  const auto& q2 = quad.axis2().weights;
  std::vector<double> row_totals(values.rows());
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < values.rows(); ++k) {
    const auto row = values.row(k);
    double s = 0.0;
    for (std::size_t l = 0; l < row.size(); ++l) s += q2[l] * row[l];
    row_totals[k] = q1[k] * s;
  }
  return pairwise_sum(row_totals);
}

ComplexGrid uniform_dft2(const Matrix& data, int origin1, int origin2, double offset1, double offset2,
                         std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("uniform_dft2: empty frequency grid");
  const std::size_t total = n1 * n2;
  std::unique_ptr<fftw_complex[], FftwFree> buf(fftw_alloc_complex(total));
  if (!buf) throw std::bad_alloc();
  for (std::size_t i = 0; i < total; ++i) buf[i][0] = buf[i][1] = 0.0;

  const auto p1 = phases(data.rows(), origin1, offset1);
  const auto p2 = phases(data.cols(), origin2, offset2);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const std::size_t i1 = wrap(static_cast<long>(r) + origin1, n1);
    for (std::size_t c = 0; c < data.cols(); ++c) {
      const double v = data(r, c);
      if (v == 0.0) continue;
      const std::complex<double> z = v * p1[r] * p2[c];
      const std::size_t i = i1 * n2 + wrap(static_cast<long>(c) + origin2, n2);
      buf[i][0] += z.real();
      buf[i][1] += z.imag();
    }
  }

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(n1), static_cast<int>(n2), buf.get(), buf.get(), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("uniform_dft2: FFTW planning failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  ComplexGrid out(total);
  for (std::size_t i = 0; i < total; ++i) out[i] = {buf[i][0], buf[i][1]};
  return out;
}

ComplexGrid separable_dft2(const Matrix& data, int origin1, int origin2, std::span<const double> freqs1,
                           std::span<const double> freqs2) {
  const std::size_t rows = data.rows();
  const std::size_t cols = data.cols();
  const std::size_t m1 = freqs1.size();
  const std::size_t m2 = freqs2.size();

  // partial(r, k2) = sum_c data(r, c) exp(-i lam2_k2 (c + origin2))
  ComplexGrid partial(rows * m2);
#pragma omp parallel for schedule(static)
  for (std::size_t k2 = 0; k2 < m2; ++k2) {
    const auto e = phases(cols, origin2, freqs2[k2]);
    for (std::size_t r = 0; r < rows; ++r) {
      std::complex<double> s = 0.0;
      for (std::size_t c = 0; c < cols; ++c) s += data(r, c) * e[c];
      partial[r * m2 + k2] = s;
    }
  }

  ComplexGrid out(m1 * m2);
#pragma omp parallel for schedule(static)
  for (std::size_t k1 = 0; k1 < m1; ++k1) {
    const auto e = phases(rows, origin1, freqs1[k1]);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t k2 = 0; k2 < m2; ++k2) out[k1 * m2 + k2] += e[r] * partial[r * m2 + k2];
    }
  }
  return out;
}

Matrix lag_products(const Matrix& field, std::size_t max_lag) {
  const std::size_t n = field.rows();
  if (field.cols() != n) throw std::invalid_argument("lag_products: field must be square");
  if (max_lag >= n) throw std::invalid_argument("lag_products: max_lag must be below the side length");
  Matrix out(max_lag + 1, max_lag + 1);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t a = 0; a <= max_lag; ++a) {
    for (std::size_t b = 0; b <= max_lag; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k + a < n; ++k) {
        const auto lo = field.row(k);
        const auto hi = field.row(k + a);
        for (std::size_t l = 0; l + b < n; ++l) s += lo[l] * hi[l + b];
      }
      out(a, b) = s;
    }
  }
  return out;
}

}  // namespace gmce::kernels
