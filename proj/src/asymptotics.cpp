#include "gmce/asymptotics.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gmce/kernels.hpp"

namespace gmce {

namespace {

constexpr double kPi = std::numbers::pi;

struct NodeValues {
  double f;
  double w;
  double L1;
  double L2;
};

// Integrates fn(node) over the context grid.
double integrate_nodes(const LrdParams& theta, const ContrastContext& ctx,
                       const std::function<double(const NodeValues&)>& fn) {
  const auto& q = ctx.quad();
  Matrix v(q.rows(), q.cols());
  for (std::size_t k = 0; k < q.rows(); ++k) {
    const double L1 = ctx.axis(0).log_dist[k];
    for (std::size_t l = 0; l < q.cols(); ++l) {
      const double L2 = ctx.axis(1).log_dist[l];
      const double f = std::exp(ctx.log_level() - 2.0 * theta.d1 * L1 - 2.0 * theta.d2 * L2);
      v(k, l) = fn({f, ctx.weight_at(k, l), L1, L2});
    }
  }
  return kernels::tensor_integrate(q, v);
}

Vec2 grad_f(const NodeValues& n) { return {-2.0 * n.L1 * n.f, -2.0 * n.L2 * n.f}; }

double log_dist(const NodeValues& n, std::size_t i) { return i == 0 ? n.L1 : n.L2; }

template <class Entry>
Mat2 symmetric_from(Entry entry) {
  Mat2 m;
  m(0, 0) = entry(0, 0);
  m(1, 1) = entry(1, 1);
  m(0, 1) = m(1, 0) = entry(0, 1);
  return m;
}

bool positive_definite(const Mat2& m) {
  const auto ev = m.symmetric_eigenvalues();
  return ev[0] > 0.0;
}

std::string describe(const char* name, const Mat2& m) {
  const auto ev = m.symmetric_eigenvalues();
  std::ostringstream os;
  os << name << " is not positive definite (eigenvalues " << ev[0] << ", " << ev[1] << ")";
  return os.str();
}

}  // namespace

Mat2 matrix_S(const LrdParams& theta, const ContrastContext& ctx) {
  const auto s = sigma2_derivatives(theta, ctx);
  return symmetric_from([&](std::size_t i, std::size_t j) {
    return integrate_nodes(theta, ctx, [&](const NodeValues& n) {
      const Vec2 df = grad_f(n);
      const double hf = 4.0 * log_dist(n, i) * log_dist(n, j) * n.f;
      const double d2_log_f = hf / n.f - df[i] * df[j] / (n.f * n.f);
      const double d2_log_s = s.hess(i, j) / s.value - s.grad[i] * s.grad[j] / (s.value * s.value);
      return n.f * n.w * (d2_log_f - d2_log_s);
    });
  });
}

Mat2 matrix_S_reduced(const LrdParams& theta, const ContrastContext& ctx, ReducedAlgebra algebra) {
  const auto s = sigma2_derivatives(theta, ctx);
  const double coef = algebra == ReducedAlgebra::original ? 3.0 : 1.0;
  // s.hess(i, j) is 4 * integral of L_i L_j w f.
  return symmetric_from(
      [&](std::size_t i, std::size_t j) { return coef / s.value * s.grad[i] * s.grad[j] - s.hess(i, j); });
}

Mat2 matrix_A(const LrdParams& theta, const ContrastContext& ctx) {
  const auto s = sigma2_derivatives(theta, ctx);
  return symmetric_from([&](std::size_t i, std::size_t j) {
    return 8.0 * kPi * kPi * integrate_nodes(theta, ctx, [&](const NodeValues& n) {
             const Vec2 df = grad_f(n);
             const double dli = df[i] / n.f - s.grad[i] / s.value;
             const double dlj = df[j] / n.f - s.grad[j] / s.value;
             const double fw = n.f * n.w;
             return fw * fw * dli * dlj;
           });
  });
}

Mat2 matrix_A_psi_form(const LrdParams& theta, const ContrastContext& ctx) {
  const auto s = sigma2_derivatives(theta, ctx);
  const double s4 = s.value * s.value;
  return symmetric_from([&](std::size_t i, std::size_t j) {
    return 8.0 * kPi * kPi * s4 * integrate_nodes(theta, ctx, [&](const NodeValues& n) {
             const Vec2 df = grad_f(n);
             const double dpi = (df[i] * s.value - s.grad[i] * n.f) / s4;
             const double dpj = (df[j] * s.value - s.grad[j] * n.f) / s4;
             return n.w * n.w * dpi * dpj;
           });
  });
}

Mat2 matrix_A_decomposition(const LrdParams& theta, const ContrastContext& ctx, ReducedAlgebra algebra) {
  const auto s = sigma2_derivatives(theta, ctx);
  const double c = 8.0 * kPi * kPi;
  auto moment_LL = [&](std::size_t i, std::size_t j) {
    return integrate_nodes(theta, ctx, [&](const NodeValues& n) {
      const double fw = n.f * n.w;
      return log_dist(n, i) * log_dist(n, j) * fw * fw;
    });
  };
  auto moment_L = [&](std::size_t i) {
    return integrate_nodes(theta, ctx, [&](const NodeValues& n) {
      const double fw = n.f * n.w;
      return log_dist(n, i) * fw * fw;
    });
  };
  const double moment_1 = integrate_nodes(theta, ctx, [](const NodeValues& n) {
    const double fw = n.f * n.w;
    return fw * fw;
  });
  const double sig2 = s.value;
  const double sig4 = sig2 * sig2;
  const auto& g = s.grad;

  if (algebra == ReducedAlgebra::original) {
    auto s2 = [&](std::size_t i, std::size_t j) { return 2.0 * c * sig2 * g[j] * moment_L(i); };
    return symmetric_from([&](std::size_t i, std::size_t j) {
      const double S1 = 4.0 * c * sig4 * moment_LL(i, j);
      const double S3 = c * g[j] * g[j] * moment_1;
      return S1 - s2(i, j) - s2(j, i) + S3;
    });
  }
  auto s2 = [&](std::size_t i, std::size_t j) { return -2.0 * c * g[j] / sig2 * moment_L(i); };
  return symmetric_from([&](std::size_t i, std::size_t j) {
    const double S1 = 4.0 * c * moment_LL(i, j);
    const double S3 = c * g[i] * g[j] / sig4 * moment_1;
    return S1 - s2(i, j) - s2(j, i) + S3;
  });
}

SandwichCovariance assemble_sandwich(const Mat2& S, const Mat2& A) {
  SandwichCovariance out;
  out.S = S;
  out.A = A;
  out.condition_S = S.condition_number();
  out.condition_A = A.condition_number();
  if (!(out.condition_S <= kMaxConditionS)) throw std::domain_error("sandwich: S is numerically singular");
  const Mat2 inv = S.inverse();
  out.cov = inv * A * inv;
  return out;
}

SandwichCovariance sandwich(const LrdParams& theta, const ContrastContext& ctx) {
  SandwichCovariance out = assemble_sandwich(matrix_S(theta, ctx), matrix_A(theta, ctx));
  if (!(theta.d1 > 0.0 && theta.d1 < 0.25 && theta.d2 > 0.0 && theta.d2 < 0.25))
    out.warnings.push_back("theta outside (0, 1/4)^2: the A integrals need not converge");
  if (!positive_definite(out.S)) out.warnings.push_back(describe("S", out.S));
  if (!positive_definite(out.A)) out.warnings.push_back(describe("A", out.A));
  if (!positive_definite(out.cov)) out.warnings.push_back(describe("S^-1 A S^-1", out.cov));
  return out;
}

Vec2 check_condition_A4(const LrdParams& theta, const ContrastContext& ctx) {
  const auto s = sigma2_derivatives(theta, ctx);
  const double s4 = s.value * s.value;
  Vec2 r{};
  for (std::size_t i = 0; i < 2; ++i) {
    r[i] = integrate_nodes(theta, ctx, [&](const NodeValues& n) {
      const Vec2 df = grad_f(n);
      return n.w * (df[i] * s.value - s.grad[i] * n.f) / s4;
    });
  }
  return r;
}

}  // namespace gmce
