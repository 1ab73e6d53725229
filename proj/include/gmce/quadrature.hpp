#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gmce/model.hpp"

namespace gmce {

/// One-dimensional rule on [-pi, pi]: nodes ascending, weights positive.
struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Tensor-product rule over [-pi, pi]^2. Node (k, l) is
/// (axis1.nodes[k], axis2.nodes[l]) with weight axis1.weights[k] * axis2.weights[l].
class QuadratureGrid {
 public:
  QuadratureGrid() = default;
  QuadratureGrid(AxisRule axis1, AxisRule axis2);

  const AxisRule& axis1() const noexcept { return axis1_; }
  const AxisRule& axis2() const noexcept { return axis2_; }
  std::size_t rows() const noexcept { return axis1_.size(); }
  std::size_t cols() const noexcept { return axis2_.size(); }
  std::size_t size() const noexcept { return rows() * cols(); }

  Frequency node(std::size_t k, std::size_t l) const noexcept {
    return {axis1_.nodes[k], axis2_.nodes[l]};
  }
  double weight(std::size_t k, std::size_t l) const noexcept {
    return axis1_.weights[k] * axis2_.weights[l];
  }

  double total_weight() const;

 private:
  AxisRule axis1_;
  AxisRule axis2_;
};

/// Nodes closer than this to a pole are pushed away by this amount.
inline constexpr double kPoleGuard = 1e-9;

/// Uniform midpoints -pi + (k + 1/2) 2pi/M on one axis; any node within
/// kPoleGuard of +-nu is moved to distance kPoleGuard (weight unchanged).
AxisRule midpoint_axis(std::size_t n, double nu);

/// Midpoint rule on a mesh refined towards +-nu: each of the four segments
/// between -pi, -nu, 0, nu, pi is split into a graded part next to the pole
/// (cell edges growing as s^grading) and a uniform part. Weights are cell
/// lengths, so they sum to 2pi exactly up to rounding.
AxisRule graded_axis(std::size_t n, double nu, double grading = 4.0);

/// Contrast-integration grid: midpoint_axis on both axes (default 256).
QuadratureGrid midpoint_grid(std::size_t nodes_per_axis, const ModelParams& model);

/// Autocovariance grid: graded_axis on both axes (default 1024). The cell
/// next to a pole leaves an error of order n^{-4(1-2d)}, so convergence slows
/// as d approaches 1/2.
QuadratureGrid graded_grid(std::size_t nodes_per_axis, const ModelParams& model);

/// Throws std::invalid_argument unless weights are positive, sum to 4 pi^2
/// within 1e-10 (relative), nodes lie in [-pi, pi] and none sits on a pole.
void validate_grid(const QuadratureGrid& quad, const ModelParams& model);

/// Pairwise (cascade) summation with a fixed association order.
double pairwise_sum(std::span<const double> values);

}  // namespace gmce
