#include "betadelta/duality.hpp"

#include <cmath>

#include "betadelta/linalg.hpp"

namespace betadelta {

double duality_slack(double primal_l1) { return 1e-4 * (1.0 + primal_l1); }

double dual_from_objective(double qp_opt, double beta, double delta) {
  if (beta <= 0.0) throw std::invalid_argument("dual_from_objective: beta <= 0");
  const double lambda = 0.5 / beta;
  return 2.0 * lambda * qp_opt - lambda * delta * delta;
}

double dual_value(const DenseMatrix& A, const Vec& b, double delta, double beta,
                  const QpConfig& qp) {
  if (delta < 0.0) throw std::invalid_argument("dual_value: delta < 0");
  QpConfig cfg = qp;
  cfg.beta = beta;
  const SparseSolution sol = solve_qp(A, b, cfg);
  if (!sol.converged) return std::numeric_limits<double>::quiet_NaN();
  const double opt = 0.5 * sol.residual_norm * sol.residual_norm + beta * norm1(sol.x);
  return dual_from_objective(opt, beta, delta);
}

double check_boundary(const DenseMatrix& A, const Vec& b, double delta, const Vec& x) {
  Vec r = matvec(A, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return norm2(r) - delta;
}

Vec log_space(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_space: need 0 < lo < hi");
  if (points < 2) throw std::invalid_argument("log_space: need at least 2 points");
  Vec grid(points);
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / static_cast<double>(points - 1);
  for (std::size_t j = 0; j < points; ++j) {
    grid[j] = std::exp(llo + static_cast<double>(j) * step);
  }
  grid.front() = lo;
  grid.back() = hi;
  for (std::size_t j = 1; j < points; ++j) {
    if (!(grid[j] > grid[j - 1])) throw std::invalid_argument("log_space: grid collapsed");
  }
  return grid;
}

DualScan scan_dual(const DenseMatrix& A, const Vec& b, double delta,
                   const Vec& beta_grid, const ScanConfig& cfg,
                   const PointObserver& observer) {
  if (delta < 0.0) throw std::invalid_argument("scan_dual: delta < 0");
  if (beta_grid.empty()) throw std::invalid_argument("scan_dual: empty grid");
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    if (!(beta_grid[i] > 0.0)) throw std::invalid_argument("scan_dual: grid must be positive");
    if (i > 0 && !(beta_grid[i] > beta_grid[i - 1])) {
      throw std::invalid_argument("scan_dual: grid must be strictly ascending");
    }
  }

  DualScan scan;
  scan.betas = beta_grid;
  scan.lpn = solve_lpn(A, b, delta, [&] {
    LpnConfig lc = cfg.lpn;
    if (lc.qp.fixed_step_L <= 0.0) lc.qp.fixed_step_L = 1.01 * power_iteration_lmax(A);
    return lc;
  }());
  scan.primal_l1 = norm1(scan.lpn.solution.x);
  if (scan.lpn.status == LpnStatus::kTrivialZero) {
    scan.trivial = true;  // scan skipped: no finite beta to compare against
    return scan;
  }

  const std::size_t points = beta_grid.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  scan.g_values.assign(points, nan);
  scan.qp_residuals.assign(points, nan);
  scan.qp_kkt.assign(points, nan);
  scan.qp_support_sizes.assign(points, 0);
  scan.qp_converged.assign(points, 0);

  QpConfig base = cfg.qp;
  if (base.fixed_step_L <= 0.0 && base.step_rule == StepRule::kSpectralNorm) {
    base.fixed_step_L = 1.01 * power_iteration_lmax(A);
  }

  // Sweep from the largest beta down so each solve warm-starts from its
  // neighbor; results are index-aligned with the ascending grid.
  Vec warm;
  bool have_warm = false;
  for (std::size_t idx = points; idx-- > 0;) {
    const double beta = beta_grid[idx];
    QpConfig qcfg = base;
    qcfg.beta = beta;
    if (cfg.beta_scaled_tol) {
      qcfg.tol = std::min(qcfg.tol, std::max(1e-7 * beta, 1e-12));
    }
    SparseSolution sol = solve_qp(A, b, qcfg, have_warm ? &warm : nullptr);
    scan.qp_residuals[idx] = sol.residual_norm;
    scan.qp_kkt[idx] = sol.kkt;
    scan.qp_support_sizes[idx] = sol.k;
    scan.qp_converged[idx] = sol.converged ? 1 : 0;
    if (sol.converged) {
      const double opt = 0.5 * sol.residual_norm * sol.residual_norm + beta * norm1(sol.x);
      scan.g_values[idx] = dual_from_objective(opt, beta, delta);
    }
    if (observer) observer(idx, sol);
    warm = std::move(sol.x);
    have_warm = true;
  }

  const double slack = duality_slack(scan.primal_l1);
  double g_best = -std::numeric_limits<double>::infinity();
  std::size_t best = points;  // sentinel: no finite value
  for (std::size_t idx = 0; idx < points; ++idx) {
    const double g = scan.g_values[idx];
    if (!std::isfinite(g)) continue;
    if (g > scan.primal_l1 + slack) ++scan.weak_duality_violations;
    if (g > g_best) {
      g_best = g;
      best = idx;
    }
  }
  if (best < points) {
    scan.best_index = best;
    scan.beta_best = beta_grid[best];
    scan.gap = scan.primal_l1 - g_best;
  }
  return scan;
}

}  // namespace betadelta
