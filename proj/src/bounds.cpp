#include "betadelta/bounds.hpp"

#include <cmath>

#include "betadelta/linalg.hpp"

namespace betadelta {

double beta_upper(double lambda_max, std::size_t k, double delta) {
  if (k < 1) throw std::invalid_argument("beta_upper: empty support");
  if (lambda_max < 0.0) throw std::invalid_argument("beta_upper: lambda_max < 0");
  if (delta < 0.0) throw std::invalid_argument("beta_upper: delta < 0");
  return std::sqrt(lambda_max / static_cast<double>(k)) * delta;
}

double beta_lower(double lambda_min_nonzero, std::size_t m, double delta) {
  if (m < 1) throw std::invalid_argument("beta_lower: m < 1");
  if (lambda_min_nonzero < 0.0) throw std::invalid_argument("beta_lower: lambda < 0");
  if (delta < 0.0) throw std::invalid_argument("beta_lower: delta < 0");
  return std::sqrt(lambda_min_nonzero / static_cast<double>(m)) * delta;
}

BetaBounds exact_bounds(const DenseMatrix& A_bar, double delta) {
  const std::size_t m = A_bar.rows;
  const std::size_t k = A_bar.cols;
  if (k < 1 || k > m) throw std::invalid_argument("exact_bounds: need 1 <= k <= m");
  if (delta < 0.0) throw std::invalid_argument("exact_bounds: delta < 0");

  const Vec evs = symmetric_eigenvalues(gram(A_bar));
  const double lambda_max = evs.front();
  if (lambda_max <= 0.0) {
    throw std::invalid_argument("exact_bounds: matrix has no nonzero eigenvalue");
  }
  const double rank_tol = 1e-10 * lambda_max;
  double lambda_min = lambda_max;
  for (double v : evs) {
    if (v > rank_tol) lambda_min = v;  // values descend: the last above tol wins
  }

  BetaBounds bb;
  bb.lambda_max = lambda_max;
  bb.lambda_min_nonzero = lambda_min;
  bb.k = k;
  bb.m = m;
  bb.delta = delta;
  bb.lower = beta_lower(lambda_min, m, delta);
  bb.upper = beta_upper(lambda_max, k, delta);
  bb.method = BoundMethod::kExactEigen;
  return bb;
}

EigenEstimates gaussian_eigen_estimates(std::size_t m, double sigma, double gamma) {
  if (m < 1) throw std::invalid_argument("gaussian_eigen_estimates: m < 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gaussian_eigen_estimates: need 0 < gamma <= 1");
  }
  if (sigma < 0.0) throw std::invalid_argument("gaussian_eigen_estimates: sigma < 0");
  const double base = static_cast<double>(m) * sigma * sigma;
  const double root = std::sqrt(gamma);
  EigenEstimates est;
  est.lambda_min = base * (1.0 - root) * (1.0 - root);
  est.lambda_max = base * (1.0 + root) * (1.0 + root);
  return est;
}

BetaBounds gaussian_beta_interval(std::size_t m, std::size_t k, double sigma,
                                  double delta) {
  if (k < 1 || k > m) throw std::invalid_argument("gaussian_beta_interval: need 1 <= k <= m");
  if (delta < 0.0) throw std::invalid_argument("gaussian_beta_interval: delta < 0");
  const double gamma = static_cast<double>(k) / static_cast<double>(m);
  const EigenEstimates est = gaussian_eigen_estimates(m, sigma, gamma);

  BetaBounds bb;
  bb.lambda_max = est.lambda_max;
  bb.lambda_min_nonzero = est.lambda_min;
  bb.k = k;
  bb.m = m;
  bb.delta = delta;
  bb.lower = beta_lower(est.lambda_min, m, delta);
  bb.upper = beta_upper(est.lambda_max, k, delta);
  bb.method = BoundMethod::kGaussianAsymptotic;
  return bb;
}

EqualityResult beta_equality(const DenseMatrix& A_bar, const Vec& b,
                             const SignVector& c, double delta) {
  const std::size_t k = A_bar.cols;
  if (b.size() != A_bar.rows) throw std::invalid_argument("beta_equality: b size mismatch");
  if (c.size() != k || k == 0) throw std::invalid_argument("beta_equality: sign size mismatch");
  if (delta < 0.0) throw std::invalid_argument("beta_equality: delta < 0");
  for (double ci : c.values) {
    if (ci != 1.0 && ci != -1.0) {
      throw std::invalid_argument("beta_equality: signs must be +1/-1");
    }
  }

  const DenseMatrix G = gram(A_bar);
  const Vec atb = matvec_transpose(A_bar, b);
  const Vec y = solve_spd(G, atb);       // G^{-1} A_bar^T b
  const Vec z = solve_spd(G, c.values);  // G^{-1} c

  const double b2 = dot(b, b);
  double num = delta * delta - b2 + dot(atb, y);
  const double den = dot(c.values, z);
  if (num < 0.0 && num >= -1e-10 * std::max(1.0, b2)) num = 0.0;  // exact-fit rounding
  if (num < 0.0) {
    throw InfeasibleSupportError(
        "beta_equality: support/sign pattern inconsistent with delta (negative radicand)");
  }
  if (den <= 0.0) {
    throw SingularMatrixError("beta_equality: degenerate Gram quadratic form");
  }

  EqualityResult res;
  res.beta = std::sqrt(num / den);
  res.x_bar.resize(k);
  res.sign_consistent = true;
  for (std::size_t i = 0; i < k; ++i) {
    res.x_bar[i] = y[i] - res.beta * z[i];
    const double s = res.x_bar[i] < 0.0 ? -1.0 : 1.0;
    if (s != c.values[i]) res.sign_consistent = false;
  }
  return res;
}

Vec residual_eigen_coefficients(const DenseMatrix& A_bar, const Vec& residual) {
  const std::size_t m = A_bar.rows;
  if (residual.size() != m) {
    throw std::invalid_argument("residual_eigen_coefficients: size mismatch");
  }
  // m x m outer product A_bar A_bar^T; rows of A_bar are contiguous slices
  DenseMatrix P(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double s = dot(A_bar.row(i), A_bar.row(j), A_bar.cols);
      P(i, j) = s;
      P(j, i) = s;
    }
  }
  const EigenDecomposition d = symmetric_eigen(P);
  Vec alpha(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += d.vectors(i, j) * residual[i];
    alpha[j] = s;
  }
  return alpha;
}

}  // namespace betadelta
