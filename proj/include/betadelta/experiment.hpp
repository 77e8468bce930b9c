#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "betadelta/bounds.hpp"
#include "betadelta/duality.hpp"
#include "betadelta/types.hpp"

namespace betadelta {

struct TrialParams {
  std::size_t n = 256;
  std::size_t m = 100;
  std::size_t k = 24;
  double sigma = 1.0;
  double sigma_w = 0.15;
  std::string label;  // free-form tag (e.g. nominal SNR); never computed from
};

bool operator==(const TrialParams& a, const TrialParams& b);

struct GridSpec {
  std::size_t points = 100;
  double min_factor = 1e-4;  // grid spans [min_factor, max_factor] * beta_max
  double max_factor = 1.0;
};

/// ||x_true - x_hat|| / ||x_true||. Rejects a zero ground truth.
double normalized_error(const Vec& x_true, const Vec& x_hat);

/// Log-spaced grid anchored at this problem's beta_max = ||A^T b||_inf.
Vec make_beta_grid(const DenseMatrix& A, const Vec& b, const GridSpec& spec);

/// Everything a single seeded run produces: the constrained solve, the grid
/// sweep with dual values and reconstruction errors, both bound estimates,
/// and the diagnostics needed to re-check the invariants offline.
struct TrialReport {
  std::uint64_t seed = 0;
  TrialParams params;
  double delta = 0.0;

  Vec betas;
  Vec g_values;
  Vec qp_errors;     // ||x* - x(beta)|| / ||x*|| per grid point
  Vec qp_residuals;  // ||A x(beta) - b|| per grid point
  Vec qp_kkt;
  Vec identity_errors;  // relative error of ||Abar^T r||^2 == beta^2 k
  std::vector<std::size_t> qp_support_sizes;
  std::vector<char> qp_converged;

  double lpn_l1 = 0.0;
  double lpn_error = 0.0;
  double beta_star = 0.0;
  double beta_best = 0.0;
  double gap = 0.0;
  double boundary_gap = 0.0;
  bool lpn_converged = false;

  BetaBounds bounds_exact;     // spectrum of the recovered support
  BetaBounds bounds_gaussian;  // a-priori interval from the design k
  bool best_in_bounds = false;

  bool trivial = false;
  bool noiseless = false;
  std::size_t weak_duality_violations = 0;

  Vec x_true;
  Vec x_lpn;
};

/// One full seeded run: generate the problem, solve the constrained form,
/// sweep the grid, locate the best beta, and compare against both bounds.
/// Trivial-case and non-convergence conditions are recorded in the report
/// rather than thrown.
TrialReport run_trial(const TrialParams& params, const Vec& beta_grid,
                      std::uint64_t seed, const ScanConfig& cfg = {});

/// Repeated trials with per-trial seeds derive_seed(master_seed, i). All
/// trials share one absolute grid, anchored at trial 0's problem so that
/// aggregation over a common grid is well defined. `jobs` > 1 fans trials
/// out to a worker pool; the result order (and content) is independent of
/// scheduling.
std::vector<TrialReport> run_trials(const TrialParams& params, const GridSpec& grid,
                                    std::uint64_t master_seed, std::size_t trials,
                                    std::size_t jobs = 1);

struct AggregateReport {
  std::size_t trial_count = 0;
  Vec betas;
  Vec mean_g_curve;
  Vec mean_qp_error_curve;
  Vec mean_qp_residual_curve;
  Vec mean_qp_support_curve;
  double mean_lpn_l1 = 0.0;
  double mean_lpn_error = 0.0;
  double bounds_coverage_rate = 0.0;  // fraction of trials with best_in_bounds
  double mean_beta_best = 0.0;
};

/// Pointwise means over trials sharing identical params and grid; rejects
/// mixed-grid input.
AggregateReport aggregate(const std::vector<TrialReport>& reports);

}  // namespace betadelta
