#pragma once

#include <cstddef>
#include <functional>
#include <limits>

#include "betadelta/lpn.hpp"
#include "betadelta/qp.hpp"
#include "betadelta/types.hpp"

namespace betadelta {

struct ScanConfig {
  QpConfig qp;    // per-point solves; beta and tol are managed internally
  LpnConfig lpn;  // the primal reference solve
  // Tighten the per-point tolerance to min(tol, 1e-7 * beta) so certificates
  // stay meaningful relative to beta at the small end of the grid.
  bool beta_scaled_tol = true;
};

struct DualScan {
  Vec betas;     // ascending grid
  Vec g_values;  // dual values; NaN where the solve did not converge
  double primal_l1 = std::numeric_limits<double>::quiet_NaN();
  double beta_best = std::numeric_limits<double>::quiet_NaN();
  std::size_t best_index = 0;
  double gap = std::numeric_limits<double>::quiet_NaN();  // primal_l1 - max g
  std::size_t weak_duality_violations = 0;
  bool trivial = false;  // ||b|| <= delta: scan skipped
  LpnResult lpn;
  // Per-point solve diagnostics, index-aligned with betas.
  Vec qp_residuals;
  Vec qp_kkt;
  std::vector<std::size_t> qp_support_sizes;
  std::vector<char> qp_converged;
};

/// Slack allowed on the weak-duality comparison g <= primal_l1.
double duality_slack(double primal_l1);

/// g evaluated from a known optimal objective value: with lambda = 1/(2 beta),
/// g = 2 lambda * qp_opt - lambda * delta^2.
double dual_from_objective(double qp_opt, double beta, double delta);

/// Dual value of the constrained problem at multiplier lambda = 1/(2 beta),
/// obtained through a penalized solve at beta. NaN when the solve fails.
double dual_value(const DenseMatrix& A, const Vec& b, double delta, double beta,
                  const QpConfig& qp = {});

/// ||Ax - b|| - delta, signed. Zero (to tolerance) at any nonzero
/// constrained minimizer.
double check_boundary(const DenseMatrix& A, const Vec& b, double delta, const Vec& x);

/// Strictly ascending log-spaced grid over [lo, hi], `points` >= 2 entries.
Vec log_space(double lo, double hi, std::size_t points);

using PointObserver = std::function<void(std::size_t, const SparseSolution&)>;

/// Evaluate the dual on every grid point (descending order internally, each
/// solve warm-started from its neighbor) and identify the maximizing beta.
/// The primal reference comes from solve_lpn. Failed points are recorded as
/// NaN and excluded from the argmax. Weak-duality violations are counted,
/// not thrown, so callers can surface them in reports. The observer, when
/// given, sees each grid point's solution in ascending-index order semantics
/// (index into `betas`).
DualScan scan_dual(const DenseMatrix& A, const Vec& b, double delta,
                   const Vec& beta_grid, const ScanConfig& cfg = {},
                   const PointObserver& observer = {});

}  // namespace betadelta
