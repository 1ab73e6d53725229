#pragma once

// S(theta) and A(theta) of the limiting covariance S^-1 A S^-1 of the scaled
// adjusted estimator T (theta*_T - theta0), each computed along two routes:
// the integral definition, and a reduced closed form in terms of sigma^2,
// its derivatives and weighted log-moment integrals.

#include <string>
#include <vector>

#include "gmce/contrast.hpp"

namespace gmce {

/// Which algebra a reduced form follows.
///  - original: the reduced expressions in their original form (coefficient 3
///    on the gradient outer product in s_ij; for a_ij the S1 - S2(i,j) -
///    S2(j,i) + S3 terms with sigma^4, sigma^2 factors and the repeated j index).
///  - rederived: the same decomposition worked out again from the integral
///    definitions, which is what those definitions actually reduce to.
enum class ReducedAlgebra { original, rederived };

/// s_ij = integral of f w d^2/dtheta_i dtheta_j log Psi, the second derivative
/// assembled from f, its derivatives and sigma^2 with its derivatives.
Mat2 matrix_S(const LrdParams& theta, const ContrastContext& ctx);

/// original: (3 / sigma^2) g_i g_j - 4 int L_i L_j w f
/// rederived: (1 / sigma^2) g_i g_j - 4 int L_i L_j w f
/// with g = grad sigma^2 and L_i = log|2 cos lambda_i - 2 u_i|.
Mat2 matrix_S_reduced(const LrdParams& theta, const ContrastContext& ctx, ReducedAlgebra algebra);

/// a_ij = 8 pi^2 integral of f^2 w^2 d_i log Psi d_j log Psi.
Mat2 matrix_A(const LrdParams& theta, const ContrastContext& ctx);

/// Equivalent form of a_ij: 8 pi^2 sigma^4 integral of w^2 d_i Psi d_j Psi.
Mat2 matrix_A_psi_form(const LrdParams& theta, const ContrastContext& ctx);

/// a_ij = S1 - S2(i,j) - S2(j,i) + S3.
///  original:  S1 = 32 pi^2 sigma^4 int L_i L_j w^2 f^2,
///             S2(i,j) = 16 pi^2 sigma^2 g_j int L_i w^2 f^2,
///             S3 = 8 pi^2 g_j g_j int w^2 f^2.
///  rederived: S1 = 32 pi^2 int L_i L_j w^2 f^2,
///             S2(i,j) = -16 pi^2 (g_j / sigma^2) int L_i w^2 f^2,
///             S3 = 8 pi^2 (g_i g_j / sigma^4) int w^2 f^2.
Mat2 matrix_A_decomposition(const LrdParams& theta, const ContrastContext& ctx, ReducedAlgebra algebra);

struct SandwichCovariance {
  Mat2 S;
  Mat2 A;
  Mat2 cov;
  double condition_S = 0.0;
  double condition_A = 0.0;
  std::vector<std::string> warnings;
};

/// Condition number above which S is treated as singular.
inline constexpr double kMaxConditionS = 1e12;

/// Assembles S^-1 A S^-1 from the given S and A. Throws std::domain_error when
/// cond(S) > kMaxConditionS.
SandwichCovariance assemble_sandwich(const Mat2& S, const Mat2& A);

/// S, A and S^-1 A S^-1 at theta. Warnings are attached when theta lies
/// outside (0, 1/4)^2 (the A integrals need f^2 w^2 integrable) and when S or
/// A is not positive definite.
SandwichCovariance sandwich(const LrdParams& theta, const ContrastContext& ctx);

/// integral of grad_theta Psi(lambda, theta) w(lambda); zero in exact arithmetic.
Vec2 check_condition_A4(const LrdParams& theta, const ContrastContext& ctx);

}  // namespace gmce
