#include "betadelta/lpn.hpp"

#include <algorithm>
#include <cmath>

#include "betadelta/linalg.hpp"

namespace betadelta {

ResidualProbe probe_residual(const DenseMatrix& A, const Vec& b, double beta,
                             const QpConfig& qp, const Vec* warm_start) {
  QpConfig cfg = qp;
  cfg.beta = beta;
  ResidualProbe probe;
  probe.solution = solve_qp(A, b, cfg, warm_start);
  probe.residual = probe.solution.residual_norm;
  probe.converged = probe.solution.converged;
  return probe;
}

double residual_at_beta(const DenseMatrix& A, const Vec& b, double beta,
                        const QpConfig& qp) {
  return probe_residual(A, b, beta, qp).residual;
}

namespace {

SparseSolution zero_solution(std::size_t n, double residual) {
  SparseSolution sol;
  sol.x.assign(n, 0.0);
  sol.k = 0;
  sol.residual_norm = residual;
  sol.kkt = 0.0;
  sol.iterations = 0;
  sol.converged = true;
  return sol;
}

}  // namespace

LpnResult solve_lpn(const DenseMatrix& A, const Vec& b, double delta,
                    const LpnConfig& cfg) {
  if (delta < 0.0) throw std::invalid_argument("solve_lpn: delta < 0");
  if (b.size() != A.rows) throw std::invalid_argument("solve_lpn: b size mismatch");
  if (!all_finite(A) || !all_finite(b)) {
    throw std::invalid_argument("solve_lpn: non-finite input");
  }

  LpnResult out;
  const double b_norm = norm2(b);

  if (b_norm <= delta) {
    // x = 0 is already feasible, hence optimal; no finite positive beta is
    // distinguished.
    out.solution = zero_solution(A.cols, b_norm);
    out.status = LpnStatus::kTrivialZero;
    out.boundary_gap = b_norm - delta;
    out.converged = true;
    return out;
  }

  const double bmax = beta_max(A, b);
  if (bmax <= 0.0) {
    throw BracketError("solve_lpn: A^T b = 0, residual cannot be reduced below ||b||");
  }

  QpConfig qp = cfg.qp;
  if (qp.fixed_step_L <= 0.0 && qp.step_rule == StepRule::kSpectralNorm) {
    qp.fixed_step_L = 1.01 * power_iteration_lmax(A);  // shared by all probes
  }

  if (delta == 0.0) {
    // Noiseless limit: drive the penalty to a vanishing weight by
    // continuation. At the target weight the shrinkage per step is far too
    // weak to move a cold start, so each stage warm-starts the next and the
    // support settles at moderate weights. The stage tolerance scales with
    // beta to keep the certificate meaningful once beta drops below the
    // global tolerance.
    const double beta_target = cfg.noiseless_beta_factor * bmax;
    Vec warm_x;
    bool have_warm = false;
    ResidualProbe probe;
    for (double beta = 0.1 * bmax;; beta *= 0.1) {
      if (beta < beta_target * 1.0001) beta = beta_target;
      QpConfig stage = qp;
      stage.tol = std::min(qp.tol, std::max(1e-3 * beta, 1e-12));
      probe = probe_residual(A, b, beta, stage, have_warm ? &warm_x : nullptr);
      ++out.probes;
      if (beta == beta_target) break;
      warm_x = std::move(probe.solution.x);
      have_warm = true;
    }
    out.solution = std::move(probe.solution);
    out.beta_star = beta_target;
    out.beta_low = beta_target;
    out.beta_high = beta_target;
    out.status = LpnStatus::kNoiseless;
    out.boundary_gap = probe.residual;
    out.converged = probe.converged;
    return out;
  }

  const double tol_abs = cfg.boundary_tol * delta;
  const double beta_floor = cfg.beta_floor_factor * bmax;

  // Bracket state: residual(lo) <= delta <= residual(hi), f = residual - delta.
  double hi = bmax;
  double f_hi = b_norm - delta;  // x(beta_max) = 0 exactly
  SparseSolution sol_hi = zero_solution(A.cols, b_norm);
  double lo = 0.0, f_lo = 0.0;
  SparseSolution sol_lo;
  bool have_lo = false;

  auto accept = [&](double beta, ResidualProbe&& probe, double f_val) {
    out.solution = std::move(probe.solution);
    out.beta_star = beta;
    out.boundary_gap = f_val;
    out.beta_low = f_val <= 0.0 ? beta : lo;
    out.beta_high = f_val <= 0.0 ? hi : beta;
    if (!have_lo && f_val > 0.0) out.beta_low = beta_floor;  // low end never probed
    out.status = LpnStatus::kOk;
    out.converged = probe.converged;
  };

  // Phase 1: walk down a decade at a time until the residual dips below
  // delta, warm-starting each solve from the previous one.
  const Vec* warm = nullptr;
  for (int step = 1; !have_lo; ++step) {
    double c = bmax * std::pow(10.0, -step);
    if (c < beta_floor) c = beta_floor;
    ResidualProbe probe = probe_residual(A, b, c, qp, warm);
    ++out.probes;
    const double fc = probe.residual - delta;
    if (std::abs(fc) <= tol_abs) {
      accept(c, std::move(probe), fc);
      return out;
    }
    if (fc < 0.0) {
      lo = c;
      f_lo = fc;
      sol_lo = std::move(probe.solution);
      have_lo = true;
    } else {
      hi = c;
      f_hi = fc;
      sol_hi = std::move(probe.solution);
      warm = &sol_hi.x;
      if (c <= beta_floor) {
        throw BracketError(
            "solve_lpn: delta below the smallest achievable residual on the bracket");
      }
    }
  }

  // Phase 2: safeguarded false position (Illinois) inside the bracket.
  // w_lo/w_hi are the secant weights; after two consecutive replacements of
  // the same side the stale side's weight is halved to force crossings.
  int side = 0;
  double w_lo = f_lo, w_hi = f_hi;
  while (out.probes < cfg.max_probes) {
    const double denom = w_hi - w_lo;
    double c = denom > 0.0 ? (lo * w_hi - hi * w_lo) / denom : 0.5 * (lo + hi);
    const double guard = 0.01 * (hi - lo);
    c = std::clamp(c, lo + guard, hi - guard);
    if (!(c > lo && c < hi)) break;  // bracket exhausted at double precision

    const bool nearer_lo = std::log(c / lo) < std::log(hi / c);
    warm = nearer_lo ? &sol_lo.x : &sol_hi.x;
    ResidualProbe probe = probe_residual(A, b, c, qp, warm);
    ++out.probes;
    const double fc = probe.residual - delta;
    if (std::abs(fc) <= tol_abs) {
      accept(c, std::move(probe), fc);
      return out;
    }
    if (fc > 0.0) {
      hi = c;
      f_hi = fc;
      w_hi = fc;
      sol_hi = std::move(probe.solution);
      if (side == +1) w_lo *= 0.5;
      side = +1;
    } else {
      lo = c;
      f_lo = fc;
      w_lo = fc;
      sol_lo = std::move(probe.solution);
      if (side == -1) w_hi *= 0.5;
      side = -1;
    }
  }

  const bool lo_closer = std::abs(f_lo) <= std::abs(f_hi);
  const double best_beta = lo_closer ? lo : hi;
  const double best_f = lo_closer ? f_lo : f_hi;
  const SparseSolution* best_sol = lo_closer ? &sol_lo : &sol_hi;

  // Probe budget exhausted: report the best boundary fit seen, flagged.
  out.solution = *best_sol;
  out.beta_star = best_beta;
  out.boundary_gap = best_f;
  out.beta_low = lo;
  out.beta_high = hi;
  out.status = LpnStatus::kOk;
  out.converged = false;
  return out;
}

}  // namespace betadelta
