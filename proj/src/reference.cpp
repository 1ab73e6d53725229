#include "gmce/reference.hpp"

#include <stdexcept>

namespace gmce::reference {

Matrix direct_ma_sum(const Matrix& input, std::span<const double> c1, std::span<const double> c2) {
  const std::size_t n1 = c1.size() - 1;
  const std::size_t n2 = c2.size() - 1;
  const std::size_t out_rows = input.rows() - n1;
  const std::size_t out_cols = input.cols() - n2;
  Matrix out(out_rows, out_cols);
  for (std::size_t t1 = 0; t1 < out_rows; ++t1)
    for (std::size_t t2 = 0; t2 < out_cols; ++t2) {
      double s = 0.0;
      for (std::size_t a = 0; a <= n1; ++a)
        for (std::size_t b = 0; b <= n2; ++b) s += c1[a] * c2[b] * input(t1 + n1 - a, t2 + n2 - b);
      out(t1, t2) = s;
    }
  return out;
}

double tensor_integrate(const QuadratureGrid& quad, const Matrix& values) {
  double s = 0.0;
  for (std::size_t k = 0; k < quad.rows(); ++k)
    for (std::size_t l = 0; l < quad.cols(); ++l) s += quad.weight(k, l) * values(k, l);
  return s;
}

kernels::ComplexGrid direct_dft2(const Matrix& data, int origin1, int origin2, std::span<const double> freqs1,
                                 std::span<const double> freqs2) {
  kernels::ComplexGrid out(freqs1.size() * freqs2.size());
  for (std::size_t k1 = 0; k1 < freqs1.size(); ++k1)
    for (std::size_t k2 = 0; k2 < freqs2.size(); ++k2) {
      std::complex<double> s = 0.0;
      for (std::size_t r = 0; r < data.rows(); ++r)
        for (std::size_t c = 0; c < data.cols(); ++c) {
          const double t1 = static_cast<double>(static_cast<long>(r) + origin1);
          const double t2 = static_cast<double>(static_cast<long>(c) + origin2);
          s += data(r, c) * std::polar(1.0, -(freqs1[k1] * t1 + freqs2[k2] * t2));
        }
      out[k1 * freqs2.size() + k2] = s;
    }
  return out;
}

Matrix lag_products(const Matrix& field, std::size_t max_lag) {
  const std::size_t n = field.rows();
  Matrix out(max_lag + 1, max_lag + 1);
  for (std::size_t a = 0; a <= max_lag; ++a)
    for (std::size_t b = 0; b <= max_lag; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k + a < n; ++k)
        for (std::size_t l = 0; l + b < n; ++l) s += field(k, l) * field(k + a, l + b);
      out(a, b) = s;
    }
  return out;
}

}  // namespace gmce::reference
