#pragma once

#include "betadelta/types.hpp"

namespace betadelta {

enum class BoundMethod { kExactEigen, kGaussianAsymptotic };

/// Interval estimate for the penalty weight matching a given noise bound,
/// together with the extreme eigenvalues that produced it.
struct BetaBounds {
  double lower = 0.0;  // sqrt(lambda_min_nonzero / m) * delta
  double upper = 0.0;  // sqrt(lambda_max / k) * delta
  double lambda_max = 0.0;
  double lambda_min_nonzero = 0.0;
  std::size_t k = 0;
  std::size_t m = 0;
  double delta = 0.0;
  BoundMethod method = BoundMethod::kExactEigen;
};

double beta_upper(double lambda_max, std::size_t k, double delta);
double beta_lower(double lambda_min_nonzero, std::size_t m, double delta);

/// Bounds from the realized spectrum of A_bar (the m x k support-restricted
/// matrix). Eigenvalues come from the k x k Gram matrix; the nonzero spectrum
/// matches the m x m product. lambda_min_nonzero is the smallest eigenvalue
/// above 1e-10 * lambda_max. Rejects an all-zero A_bar.
BetaBounds exact_bounds(const DenseMatrix& A_bar, double delta);

struct EigenEstimates {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Asymptotic extreme eigenvalues of the support-restricted Gram matrix for
/// an i.i.d. Gaussian matrix with entry variance sigma^2 and aspect ratio
/// gamma = k/m:
///   lambda_min ~ m sigma^2 (1 - sqrt(gamma))^2
///   lambda_max ~ m sigma^2 (1 + sqrt(gamma))^2
EigenEstimates gaussian_eigen_estimates(std::size_t m, double sigma, double gamma);

/// The closed-form interval (1 - sqrt(gamma)) sigma delta <= beta <=
/// (1 + sqrt(gamma)) sigma delta / sqrt(gamma); computed by composing
/// gaussian_eigen_estimates with beta_lower / beta_upper.
BetaBounds gaussian_beta_interval(std::size_t m, std::size_t k, double sigma,
                                  double delta);

struct EqualityResult {
  double beta = 0.0;
  Vec x_bar;             // reduced solution reconstructed at this beta
  bool sign_consistent;  // sgn(x_bar) matches the assumed pattern
};

/// Closed-form beta for a known support and sign pattern c, assuming the
/// solution sits exactly on the constraint boundary:
///   beta = sqrt((delta^2 - ||b||^2 + b^T P b) / (c^T G^{-1} c))
/// with G = A_bar^T A_bar and P the projector A_bar G^{-1} A_bar^T. Also
/// returns the reconstructed reduced solution G^{-1}(A_bar^T b - beta c) so
/// callers can validate the assumed pattern. Throws SingularMatrixError for
/// rank-deficient G and InfeasibleSupportError when the radicand is negative
/// (the pattern is inconsistent with delta).
EqualityResult beta_equality(const DenseMatrix& A_bar, const Vec& b,
                             const SignVector& c, double delta);

/// Coefficients of `residual` in the eigenbasis of A_bar A_bar^T, ordered to
/// match descending eigenvalues. Orthonormality gives sum(alpha^2) =
/// ||residual||^2.
Vec residual_eigen_coefficients(const DenseMatrix& A_bar, const Vec& residual);

}  // namespace betadelta
