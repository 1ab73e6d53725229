#include "gmce/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace gmce {

namespace {

constexpr double kPi = std::numbers::pi;

// Cell edges measured from the pole end of a segment of length `len`.
std::vector<double> segment_edges(double len, std::size_t cells, double grading) {
  const std::size_t near_cells = cells / 2;
  const std::size_t far_cells = cells - near_cells;
  const double near_len = std::min(0.5 * len, 0.25);
  std::vector<double> edges;
  edges.reserve(cells + 1);
  for (std::size_t k = 0; k <= near_cells; ++k) {
    edges.push_back(near_len * std::pow(static_cast<double>(k) / near_cells, grading));
  }
  for (std::size_t k = 1; k <= far_cells; ++k) {
    edges.push_back(near_len + (len - near_len) * static_cast<double>(k) / far_cells);
  }
  return edges;
}

void append_segment(AxisRule& rule, double lo, double hi, bool pole_at_lo, std::size_t cells,
                    double grading) {
  const auto edges = segment_edges(hi - lo, cells, grading);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = pole_at_lo ? lo + edges[k] : hi - edges[k + 1];
    const double b = pole_at_lo ? lo + edges[k + 1] : hi - edges[k];
    rule.nodes.push_back(0.5 * (a + b));
    rule.weights.push_back(edges[k + 1] - edges[k]);
  }
}

double pairwise_sum_impl(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

}  // namespace

QuadratureGrid::QuadratureGrid(AxisRule axis1, AxisRule axis2)
    : axis1_(std::move(axis1)), axis2_(std::move(axis2)) {
  if (axis1_.nodes.size() != axis1_.weights.size() || axis2_.nodes.size() != axis2_.weights.size())
    throw std::invalid_argument("QuadratureGrid: node/weight count mismatch");
}

double QuadratureGrid::total_weight() const {
  return pairwise_sum(axis1_.weights) * pairwise_sum(axis2_.weights);
}

AxisRule midpoint_axis(std::size_t n, double nu) {
  if (n == 0) throw std::invalid_argument("midpoint_axis: need at least one node");
  AxisRule rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, 2.0 * kPi / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    double x = -kPi + (static_cast<double>(k) + 0.5) * 2.0 * kPi / static_cast<double>(n);
    for (double pole : {-nu, nu}) {
      if (std::abs(x - pole) < kPoleGuard) x = pole + (x >= pole ? kPoleGuard : -kPoleGuard);
    }
    rule.nodes[k] = x;
  }
  return rule;
}

AxisRule graded_axis(std::size_t n, double nu, double grading) {
  if (n < 8 || n % 4 != 0) throw std::invalid_argument("graded_axis: node count must be a multiple of 4, >= 8");
  if (!(nu > 0.0 && nu < kPi)) throw std::invalid_argument("graded_axis: pole must lie in (0, pi)");
  if (!(grading >= 1.0)) throw std::invalid_argument("graded_axis: grading must be >= 1");
  const std::size_t cells = n / 4;
  AxisRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  append_segment(rule, -kPi, -nu, false, cells, grading);
  append_segment(rule, -nu, 0.0, true, cells, grading);
  append_segment(rule, 0.0, nu, false, cells, grading);
  append_segment(rule, nu, kPi, true, cells, grading);

  std::vector<std::pair<double, double>> pairs(n);
  for (std::size_t k = 0; k < n; ++k) pairs[k] = {rule.nodes[k], rule.weights[k]};
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t k = 0; k < n; ++k) {
    rule.nodes[k] = pairs[k].first;
    rule.weights[k] = pairs[k].second;
  }
  return rule;
}

QuadratureGrid midpoint_grid(std::size_t nodes_per_axis, const ModelParams& model) {
  return {midpoint_axis(nodes_per_axis, model.nu1()), midpoint_axis(nodes_per_axis, model.nu2())};
}

QuadratureGrid graded_grid(std::size_t nodes_per_axis, const ModelParams& model) {
  return {graded_axis(nodes_per_axis, model.nu1()), graded_axis(nodes_per_axis, model.nu2())};
}

void validate_grid(const QuadratureGrid& quad, const ModelParams& model) {
  auto check_axis = [](const AxisRule& rule, double u, const char* name) {
    if (rule.size() == 0) throw std::invalid_argument(std::string("quadrature ") + name + " is empty");
    for (std::size_t k = 0; k < rule.size(); ++k) {
      if (!(rule.weights[k] > 0.0))
        throw std::invalid_argument(std::string("quadrature ") + name + ": nonpositive weight");
      if (!(rule.nodes[k] >= -kPi && rule.nodes[k] <= kPi))
        throw std::invalid_argument(std::string("quadrature ") + name + ": node outside [-pi, pi]");
      try {
        (void)log_pole_distance(rule.nodes[k], u);
      } catch (const SingularEvaluation&) {
        throw std::invalid_argument(std::string("quadrature ") + name + ": node on a pole");
      }
    }
  };
  check_axis(quad.axis1(), model.u1, "axis1");
  check_axis(quad.axis2(), model.u2, "axis2");
  const double total = quad.total_weight();
  if (std::abs(total - 4.0 * kPi * kPi) > 1e-10 * 4.0 * kPi * kPi)
    throw std::invalid_argument("quadrature weights do not sum to 4 pi^2");
}

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

}  // namespace gmce
