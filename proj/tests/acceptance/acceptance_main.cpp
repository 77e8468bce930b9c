// The acceptance suite: each checked claim prints one [PASS]/[FAIL] line and
// the process exits nonzero when anything failed. Criterion 11 drives the
// installed CLI binary (path in argv[1]).
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "betadelta/experiment.hpp"
#include "betadelta/generate.hpp"
#include "betadelta/io.hpp"
#include "betadelta/linalg.hpp"
#include "betadelta/rng.hpp"

using namespace betadelta;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

constexpr std::uint64_t kMasterSeed = 20250810;
constexpr std::size_t kTrials = 100;

TrialParams paper_params(double sigma_w_sq) {
  TrialParams p;
  p.n = 256;
  p.m = 100;
  p.k = 24;
  p.sigma = 1.0;
  p.sigma_w = std::sqrt(sigma_w_sq);
  return p;
}

struct SetStats {
  double coverage = 0.0;         // best beta inside the exact interval
  double below_upper_rate = 0.0; // best beta <= 1.05 * exact upper bound
  double mean_beta_best = 0.0;
  std::size_t weak_violations = 0;
  std::size_t gap_ok = 0;        // gap <= 1e-2 * primal
  std::size_t boundary_ok = 0;   // |residual - delta| <= 1e-5 delta
  std::size_t nonzero_solutions = 0;
  std::size_t converged_points = 0;
  std::size_t kkt_ok = 0;
  std::size_t identity_points = 0;
  std::size_t identity_ok = 0;
  double max_identity_err = 0.0;
};

SetStats evaluate(const std::vector<TrialReport>& reports) {
  SetStats s;
  std::size_t covered = 0, below = 0;
  for (const TrialReport& r : reports) {
    if (r.best_in_bounds) ++covered;
    if (r.beta_best <= 1.05 * r.bounds_exact.upper) ++below;
    s.mean_beta_best += r.beta_best;
    s.weak_violations += r.weak_duality_violations;
    if (r.gap <= 1e-2 * r.lpn_l1) ++s.gap_ok;
    if (norm2(r.x_lpn) > 0.0) {
      ++s.nonzero_solutions;
      if (std::abs(r.boundary_gap) <= 1e-5 * r.delta) ++s.boundary_ok;
    }
    for (std::size_t j = 0; j < r.betas.size(); ++j) {
      if (r.qp_converged[j]) {
        ++s.converged_points;
        if (r.qp_kkt[j] <= 1e-8) ++s.kkt_ok;
      }
      if (std::isfinite(r.identity_errors[j])) {
        ++s.identity_points;
        s.max_identity_err = std::max(s.max_identity_err, r.identity_errors[j]);
        if (r.identity_errors[j] <= 1e-6) ++s.identity_ok;
      }
    }
  }
  const double count = static_cast<double>(reports.size());
  s.coverage = covered / count;
  s.below_upper_rate = below / count;
  s.mean_beta_best /= count;
  return s;
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  std::printf("running %zu trials per noise level at n=256 m=100 k=24...\n", kTrials);
  std::fflush(stdout);

  const GridSpec grid;  // 100 log-spaced points over [1e-4, 1] * beta_max
  const auto t30 = run_trials(paper_params(0.0225), grid, kMasterSeed, kTrials, 1);
  const SetStats s30 = evaluate(t30);
  const auto t20 = run_trials(paper_params(0.2025), grid, kMasterSeed, kTrials, 1);
  const SetStats s20 = evaluate(t20);

  // 1. low-noise rerun: best beta inside the exact interval
  report(1,
         s30.coverage >= 0.80 && s30.below_upper_rate >= 0.98,
         "low-noise rerun: best beta within the exact spectrum bounds",
         "coverage=" + fmt(s30.coverage) +
             ", below-upper rate=" + fmt(s30.below_upper_rate));

  // 2. high-noise rerun plus the shift of the best beta
  report(2,
         s20.coverage >= 0.80 && s20.below_upper_rate >= 0.98 &&
             s20.mean_beta_best > s30.mean_beta_best,
         "high-noise rerun and rightward shift of the best beta",
         "coverage=" + fmt(s20.coverage) + ", below-upper rate=" +
             fmt(s20.below_upper_rate) + ", mean best " + fmt(s20.mean_beta_best) +
             " vs " + fmt(s30.mean_beta_best));

  // 3. weak duality: no grid value exceeds the primal by more than the slack
  report(3, s30.weak_violations + s20.weak_violations == 0,
         "weak duality holds on every grid point of every trial",
         "violations=" + std::to_string(s30.weak_violations + s20.weak_violations));

  // 4. strong duality gap on the 100-point grid
  {
    const std::size_t ok = s30.gap_ok + s20.gap_ok;
    const std::size_t total = 2 * kTrials;
    report(4, ok >= static_cast<std::size_t>(0.95 * total),
           "duality gap <= 1% of the primal value",
           std::to_string(ok) + "/" + std::to_string(total));
  }

  // 5. every nonzero constrained solution sits on the boundary
  report(5,
         s30.boundary_ok == s30.nonzero_solutions &&
             s20.boundary_ok == s20.nonzero_solutions,
         "constraint boundary attained to 1e-5 relative",
         std::to_string(s30.boundary_ok + s20.boundary_ok) + "/" +
             std::to_string(s30.nonzero_solutions + s20.nonzero_solutions));

  // 6. certificates: optimality residual and the on-support quadratic identity
  report(6,
         s30.kkt_ok == s30.converged_points && s20.kkt_ok == s20.converged_points &&
             s30.identity_ok == s30.identity_points &&
             s20.identity_ok == s20.identity_points,
         "optimality residual <= 1e-8 and ||Abar^T r||^2 = beta^2 k to 1e-6",
         "kkt " + std::to_string(s30.kkt_ok + s20.kkt_ok) + "/" +
             std::to_string(s30.converged_points + s20.converged_points) +
             ", identity max err=" +
             fmt(std::max(s30.max_identity_err, s20.max_identity_err)));

  // 7. the shared analytic instance
  {
    DenseMatrix I(2, 2);
    I(0, 0) = I(1, 1) = 1.0;
    const Vec b = {3.0, 4.0};
    const double root_half = 1.0 / std::sqrt(2.0);
    const LpnResult lpn = solve_lpn(I, b, 1.0);
    const EqualityResult eq =
        beta_equality(I, b, SignVector{{1.0, 1.0}}, 1.0);
    const bool ok = lpn.converged &&
                    std::abs(lpn.beta_star - root_half) <= 1e-4 &&
                    std::abs(lpn.solution.x[0] - (3.0 - root_half)) <= 1e-4 &&
                    std::abs(lpn.solution.x[1] - (4.0 - root_half)) <= 1e-4 &&
                    std::abs(eq.beta - lpn.beta_star) <= 1e-6;
    report(7, ok, "analytic identity instance pins beta both ways",
           "beta_star=" + fmt(lpn.beta_star) + ", closed form=" + fmt(eq.beta));
  }

  // 8. spectrum of 100x24 unit-variance draws vs the asymptotic estimates
  {
    double mean_max = 0.0, mean_min = 0.0;
    const int draws = 100;
    for (int i = 0; i < draws; ++i) {
      const DenseMatrix A =
          generate_gaussian_matrix(100, 24, 1.0, derive_seed(kMasterSeed, 500 + i));
      const Vec evs = symmetric_eigenvalues(gram(A));
      mean_max += evs.front();
      double lmin = evs.front();
      for (double v : evs) {
        if (v > 1e-10 * evs.front()) lmin = v;
      }
      mean_min += lmin;
    }
    mean_max /= draws;
    mean_min /= draws;
    const bool ok = std::abs(mean_max - 221.98) <= 0.25 * 221.98 &&
                    std::abs(mean_min - 26.02) <= 0.25 * 26.02;
    report(8, ok, "extreme eigenvalues track the asymptotic formulas",
           "mean lambda_max=" + fmt(mean_max) + " (vs 221.98), mean lambda_min=" +
               fmt(mean_min) + " (vs 26.02)");
  }

  // 9. white residuals spread evenly over the eigenbasis
  {
    const DenseMatrix A_bar =
        generate_gaussian_matrix(100, 24, 1.0, derive_seed(kMasterSeed, 900));
    const int trials = 1000;
    Vec mean_sq(100, 0.0);
    double mean_ref = 0.0;
    Rng rng(derive_seed(kMasterSeed, 901));
    for (int t = 0; t < trials; ++t) {
      Vec r(100);
      for (double& v : r) v = rng.normal();
      const Vec alpha = residual_eigen_coefficients(A_bar, r);
      for (std::size_t i = 0; i < mean_sq.size(); ++i) mean_sq[i] += alpha[i] * alpha[i];
      mean_ref += dot(r, r) / 100.0;
    }
    mean_ref /= trials;
    double worst = 0.0;
    for (double& v : mean_sq) {
      v /= trials;
      worst = std::max(worst, std::abs(v - mean_ref) / mean_ref);
    }
    report(9, worst <= 0.15, "per-coordinate energy of white residuals is flat",
           "max deviation=" + fmt(worst) + " (limit 0.15)");
  }

  // 10. noiseless limit: vanishing beta and exact support recovery
  {
    std::size_t support_ok = 0;
    bool beta_ok = true;
    const int seeds = 100;
    for (int i = 0; i < seeds; ++i) {
      const SensingProblem p = generate_problem(
          256, 100, 24, 1.0, 0.0, derive_seed(kMasterSeed, 1200 + i));
      const LpnResult res = solve_lpn(p.A, p.b, 0.0);
      if (!(res.beta_star <= 1e-6 * beta_max(p.A, p.b))) beta_ok = false;
      if (res.solution.support == detect_support(p.x_true)) ++support_ok;
    }
    report(10, beta_ok && support_ok >= 95,
           "noiseless limit: beta vanishes and the support is recovered",
           "support recovered " + std::to_string(support_ok) + "/100");
  }

  // 11. the experiment subcommand is byte-deterministic
  {
    bool ok = false;
    std::string detail = "cli path missing";
    if (!cli.empty()) {
      const auto tmp = std::filesystem::temp_directory_path() / "betadelta_acceptance";
      std::filesystem::remove_all(tmp);
      const std::string args =
          "experiment --n 256 --m 100 --k 24 --sigma-w-sq 0.0225 --trials 2 "
          "--seed 7 --grid-points 40 --out-dir ";
      const int rc1 = run_cli(cli, args + (tmp / "a").string());
      const int rc2 = run_cli(cli, args + (tmp / "b").string());
      ok = rc1 == 0 && rc2 == 0;
      detail = "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2);
      if (ok) {
        std::size_t files = 0;
        for (const auto& entry : std::filesystem::directory_iterator(tmp / "a")) {
          ++files;
          const auto other = tmp / "b" / entry.path().filename();
          if (!std::filesystem::exists(other) ||
              slurp(entry.path()) != slurp(other)) {
            ok = false;
            detail = "mismatch in " + entry.path().filename().string();
            break;
          }
        }
        if (ok) detail = std::to_string(files) + " files byte-identical";
      }
      std::filesystem::remove_all(tmp);
    }
    report(11, ok, "repeated experiment runs produce identical bytes", detail);
  }

  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
