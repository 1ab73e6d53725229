#include "gmce/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmce {

std::array<double, 2> Mat2::symmetric_eigenvalues() const noexcept {
  const double a = m[0][0];
  const double c = m[1][1];
  const double b = 0.5 * (m[0][1] + m[1][0]);
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return {mean - radius, mean + radius};
}

double Mat2::condition_number() const noexcept {
  const auto ev = symmetric_eigenvalues();
  const double lo = std::min(std::abs(ev[0]), std::abs(ev[1]));
  const double hi = std::max(std::abs(ev[0]), std::abs(ev[1]));
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

Mat2 Mat2::inverse(double det_floor) const {
  const double d = det();
  double frob2 = 0.0;
  for (const auto& r : m)
    for (double v : r) frob2 += v * v;
  if (!(std::abs(d) > det_floor * frob2)) throw std::domain_error("Mat2::inverse: singular matrix");
  Mat2 inv;
  inv.m = {{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
  return inv;
}

}  // namespace gmce
