#pragma once

// Independent reference computations used by the tests. None of these call
// the library routine they are compared against.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gmce/matrix.hpp"
#include "gmce/model.hpp"

namespace oracle {

/// For d > 0: C_n^{(d)}(u) = sum_k (-1)^k (d)_{n-k} / (k! (n-2k)!) (2u)^{n-2k},
/// with the rising factorial (d)_m = Gamma(d+m)/Gamma(d). The alternating sum
/// cancels heavily for |u| near 1, so it is accumulated with 50 digits.
inline double gegenbauer_direct(int n, double d, double u) {
  using big = boost::multiprecision::cpp_bin_float_50;
  big s = 0;
  for (int k = 0; 2 * k <= n; ++k) {
    big term = 1;
    for (int m = 0; m < n - k; ++m) term *= big(d) + m;
    for (int m = 2; m <= k; ++m) term /= m;
    for (int m = 2; m <= n - 2 * k; ++m) term /= m;
    for (int m = 0; m < n - 2 * k; ++m) term *= 2 * big(u);
    s += k % 2 ? -term : term;
  }
  return static_cast<double>(s);
}

using ThetaFn = std::function<double(const gmce::LrdParams&)>;

inline gmce::Vec2 fd_gradient(const ThetaFn& f, gmce::LrdParams t, double h) {
  gmce::Vec2 g{};
  for (std::size_t i = 0; i < 2; ++i) {
    gmce::LrdParams p = t, m = t;
    (i == 0 ? p.d1 : p.d2) += h;
    (i == 0 ? m.d1 : m.d2) -= h;
    g[i] = (f(p) - f(m)) / (2.0 * h);
  }
  return g;
}

inline gmce::Mat2 fd_hessian(const ThetaFn& f, gmce::LrdParams t, double h) {
  gmce::Mat2 H;
  auto shift = [](gmce::LrdParams x, std::size_t i, double s) {
    (i == 0 ? x.d1 : x.d2) += s;
    return x;
  };
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      H(i, j) = (f(shift(shift(t, i, h), j, h)) - f(shift(shift(t, i, h), j, -h)) - f(shift(shift(t, i, -h), j, h)) +
                 f(shift(shift(t, i, -h), j, -h))) /
                (4.0 * h * h);
  return H;
}

/// |sum_{t1,t2} exp(-i(t1 l1 + t2 l2)) Y(t1,t2)|^2 / (2 pi T)^2, one frequency at a time.
inline double periodogram_direct(const gmce::Matrix& y, int T, double l1, double l2) {
  std::complex<double> s = 0.0;
  for (std::size_t a = 0; a < y.rows(); ++a)
    for (std::size_t b = 0; b < y.cols(); ++b)
      s += y(a, b) * std::polar(1.0, -(static_cast<double>(a) * l1 + static_cast<double>(b) * l2));
  const double n = 2.0 * std::numbers::pi * T;
  return std::norm(s) / (n * n);
}

/// gamma_hat with the inclusive sums and (T - |t|) normalizers, straight from the definition.
inline double autocov_direct(const gmce::Matrix& y, int T, int j1, int j2) {
  const int a = std::abs(j1), b = std::abs(j2);
  double s = 0.0;
  for (int k = 0; k <= T - a; ++k)
    for (int l = 0; l <= T - b; ++l) s += y(k, l) * y(k + a, l + b);
  return s / ((T - a) * static_cast<double>(T - b));
}

/// (2 pi)^-2 sum_t exp(-i l.t) gamma_hat(t) over t in {1-T..T-1}^2, returned as a complex number.
inline std::complex<double> unbiased_periodogram_direct(const gmce::Matrix& y, int T, double l1, double l2) {
  std::complex<double> s = 0.0;
  for (int j1 = 1 - T; j1 <= T - 1; ++j1)
    for (int j2 = 1 - T; j2 <= T - 1; ++j2) s += autocov_direct(y, T, j1, j2) * std::polar(1.0, -(l1 * j1 + l2 * j2));
  return s / (4.0 * std::numbers::pi * std::numbers::pi);
}

}  // namespace oracle
