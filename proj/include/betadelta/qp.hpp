#pragma once

#include "betadelta/types.hpp"

namespace betadelta {

enum class StepRule {
  kSpectralNorm,   // fixed 1/L, L from power iteration on A^T A
  kBacktracking,   // L grown until the quadratic model majorizes
};

struct QpConfig {
  double beta = 1.0;
  double tol = 1e-8;  // stop when the optimality residual falls below this
  std::size_t max_iter = 100000;
  StepRule step_rule = StepRule::kSpectralNorm;
  double fixed_step_L = 0.0;       // > 0 skips the power-iteration estimate
  Vec* objective_trace = nullptr;  // test hook: accepted objective values
};

/// sign(v) * max(|v| - tau, 0).
double soft_threshold(double v, double tau);

/// ||A^T b||_inf: the penalty weight above which 0 solves the problem.
double beta_max(const DenseMatrix& A, const Vec& b);

/// 1/2 ||Ax - b||^2 + beta ||x||_1.
double qp_objective(const DenseMatrix& A, const Vec& b, const Vec& x, double beta);

/// First-order optimality residual at x:
///   max over detected support of |A^T(b - Ax)_i - beta * sgn(x_i)|,
///   max off support of (|A^T(b - Ax)_j| - beta)_+.
/// Zero exactly at a minimizer of the penalized objective.
double kkt_residual(const DenseMatrix& A, const Vec& b, const Vec& x, double beta);

/// Same, given grad = A^T(Ax - b) already evaluated at x.
double kkt_residual_from_gradient(const Vec& x, const Vec& grad, double beta);

/// lambda_max(A^T A) by power iteration (up to 50 rounds, stops when the
/// estimate changes by less than 1e-10 relative).
double power_iteration_lmax(const DenseMatrix& A);

/// Accelerated proximal gradient with momentum restart on objective
/// increase. The accepted objective sequence is non-increasing; the solve
/// converged when the returned kkt is <= cfg.tol. Non-convergence within
/// max_iter is reported through the flag, not an error.
SparseSolution solve_qp(const DenseMatrix& A, const Vec& b, const QpConfig& cfg,
                        const Vec* warm_start = nullptr);

}  // namespace betadelta
