#include "betadelta/experiment.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "betadelta/generate.hpp"
#include "betadelta/linalg.hpp"
#include "betadelta/rng.hpp"

namespace betadelta {

bool operator==(const TrialParams& a, const TrialParams& b) {
  return a.n == b.n && a.m == b.m && a.k == b.k && a.sigma == b.sigma &&
         a.sigma_w == b.sigma_w && a.label == b.label;
}

double normalized_error(const Vec& x_true, const Vec& x_hat) {
  if (x_true.size() != x_hat.size()) {
    throw std::invalid_argument("normalized_error: size mismatch");
  }
  const double ref = norm2(x_true);
  if (ref <= 0.0) throw std::invalid_argument("normalized_error: zero ground truth");
  double ss = 0.0;
  for (std::size_t i = 0; i < x_true.size(); ++i) {
    const double d = x_true[i] - x_hat[i];
    ss += d * d;
  }
  return std::sqrt(ss) / ref;
}

Vec make_beta_grid(const DenseMatrix& A, const Vec& b, const GridSpec& spec) {
  if (!(spec.min_factor > 0.0) || !(spec.max_factor > spec.min_factor)) {
    throw std::invalid_argument("make_beta_grid: need 0 < min_factor < max_factor");
  }
  const double bm = beta_max(A, b);
  if (bm <= 0.0) throw std::invalid_argument("make_beta_grid: A^T b = 0");
  return log_space(spec.min_factor * bm, spec.max_factor * bm, spec.points);
}

TrialReport run_trial(const TrialParams& params, const Vec& beta_grid,
                      std::uint64_t seed, const ScanConfig& cfg) {
  const SensingProblem problem = generate_problem(params.n, params.m, params.k,
                                                  params.sigma, params.sigma_w, seed);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  TrialReport r;
  r.seed = seed;
  r.params = params;
  r.delta = problem.delta;
  r.betas = beta_grid;
  r.x_true = problem.x_true;

  const std::size_t points = beta_grid.size();
  r.qp_errors.assign(points, nan);
  r.identity_errors.assign(points, nan);

  const double x_true_norm = norm2(problem.x_true);
  const PointObserver observer = [&](std::size_t idx, const SparseSolution& sol) {
    if (x_true_norm > 0.0) r.qp_errors[idx] = normalized_error(problem.x_true, sol.x);
    if (sol.converged && sol.k > 0) {
      // on-support optimality: ||Abar^T (b - Ax)||^2 == beta^2 k at an optimum
      Vec res = matvec(problem.A, sol.x);
      for (std::size_t i = 0; i < res.size(); ++i) res[i] = problem.b[i] - res[i];
      double q = 0.0;
      for (std::size_t j : sol.support) {
        double coldot = 0.0;
        for (std::size_t i = 0; i < problem.A.rows; ++i) {
          coldot += problem.A(i, j) * res[i];
        }
        q += coldot * coldot;
      }
      const double target =
          beta_grid[idx] * beta_grid[idx] * static_cast<double>(sol.k);
      r.identity_errors[idx] = std::abs(q - target) / target;
    }
  };

  const DualScan scan =
      scan_dual(problem.A, problem.b, problem.delta, beta_grid, cfg, observer);

  r.g_values = scan.g_values;
  r.qp_residuals = scan.qp_residuals;
  r.qp_kkt = scan.qp_kkt;
  r.qp_support_sizes = scan.qp_support_sizes;
  r.qp_converged = scan.qp_converged;
  r.weak_duality_violations = scan.weak_duality_violations;
  r.trivial = scan.trivial;
  r.noiseless = scan.lpn.status == LpnStatus::kNoiseless;

  r.lpn_l1 = scan.primal_l1;
  r.x_lpn = scan.lpn.solution.x;
  r.lpn_error = x_true_norm > 0.0 ? normalized_error(problem.x_true, r.x_lpn) : nan;
  r.beta_star = scan.lpn.beta_star;
  r.boundary_gap = scan.lpn.boundary_gap;
  r.lpn_converged = scan.lpn.converged;
  r.beta_best = scan.beta_best;
  r.gap = scan.gap;

  if (!scan.trivial && scan.lpn.solution.k >= 1) {
    const DenseMatrix a_bar =
        submatrix_columns(problem.A, scan.lpn.solution.support);
    r.bounds_exact = exact_bounds(a_bar, problem.delta);
  }
  if (params.k >= 1) {
    r.bounds_gaussian =
        gaussian_beta_interval(params.m, params.k, params.sigma, problem.delta);
  }
  r.best_in_bounds = !scan.trivial && std::isfinite(r.beta_best) &&
                     r.bounds_exact.upper > 0.0 &&
                     r.beta_best >= r.bounds_exact.lower &&
                     r.beta_best <= r.bounds_exact.upper;
  return r;
}

std::vector<TrialReport> run_trials(const TrialParams& params, const GridSpec& grid,
                                    std::uint64_t master_seed, std::size_t trials,
                                    std::size_t jobs) {
  std::vector<TrialReport> reports(trials);
  if (trials == 0) return reports;

  // One absolute grid for the whole batch, anchored at trial 0's problem,
  // so aggregation over a shared grid is well defined.
  const SensingProblem first = generate_problem(params.n, params.m, params.k,
                                                params.sigma, params.sigma_w,
                                                derive_seed(master_seed, 0));
  const Vec beta_grid = make_beta_grid(first.A, first.b, grid);

  jobs = std::max<std::size_t>(1, std::min(jobs, trials));
  if (jobs == 1) {
    for (std::size_t i = 0; i < trials; ++i) {
      reports[i] = run_trial(params, beta_grid, derive_seed(master_seed, i));
    }
    return reports;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= trials) return;
        reports[i] = run_trial(params, beta_grid, derive_seed(master_seed, i));
      }
    });
  }
  for (auto& t : pool) t.join();
  return reports;
}

AggregateReport aggregate(const std::vector<TrialReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
  const TrialReport& head = reports.front();
  for (const TrialReport& r : reports) {
    if (!(r.params == head.params) || r.betas != head.betas) {
      throw std::invalid_argument("aggregate: reports mix params or grids");
    }
  }

  const std::size_t points = head.betas.size();
  const double count = static_cast<double>(reports.size());
  AggregateReport agg;
  agg.trial_count = reports.size();
  agg.betas = head.betas;
  agg.mean_g_curve.assign(points, 0.0);
  agg.mean_qp_error_curve.assign(points, 0.0);
  agg.mean_qp_residual_curve.assign(points, 0.0);
  agg.mean_qp_support_curve.assign(points, 0.0);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::size_t covered = 0;
  for (const TrialReport& r : reports) {
    // a trivial trial has no sweep; its absence poisons the means honestly
    for (std::size_t j = 0; j < points; ++j) {
      agg.mean_g_curve[j] += r.g_values.empty() ? nan : r.g_values[j];
      agg.mean_qp_error_curve[j] += r.qp_errors[j];
      agg.mean_qp_residual_curve[j] += r.qp_residuals.empty() ? nan : r.qp_residuals[j];
      agg.mean_qp_support_curve[j] +=
          r.qp_support_sizes.empty() ? nan : static_cast<double>(r.qp_support_sizes[j]);
    }
    agg.mean_lpn_l1 += r.lpn_l1;
    agg.mean_lpn_error += r.lpn_error;
    agg.mean_beta_best += r.beta_best;
    if (r.best_in_bounds) ++covered;
  }
  for (std::size_t j = 0; j < points; ++j) {
    agg.mean_g_curve[j] /= count;
    agg.mean_qp_error_curve[j] /= count;
    agg.mean_qp_residual_curve[j] /= count;
    agg.mean_qp_support_curve[j] /= count;
  }
  agg.mean_lpn_l1 /= count;
  agg.mean_lpn_error /= count;
  agg.mean_beta_best /= count;
  agg.bounds_coverage_rate = static_cast<double>(covered) / count;
  return agg;
}

}  // namespace betadelta
