#pragma once

#include <limits>

#include "betadelta/qp.hpp"
#include "betadelta/types.hpp"

namespace betadelta {

enum class LpnStatus {
  kOk,           // nonzero solution on the constraint boundary
  kTrivialZero,  // ||b|| <= delta: x = 0 optimal, no distinguished beta
  kNoiseless,    // delta = 0: solved at a vanishing penalty weight
};

struct LpnConfig {
  double boundary_tol = 1e-5;  // |residual - delta| <= boundary_tol * delta
  std::size_t max_probes = 200;
  QpConfig qp;                          // beta is managed per probe
  double beta_floor_factor = 1e-12;     // bracket floor, relative to beta_max
  double noiseless_beta_factor = 1e-10; // penalty used for the delta = 0 path
};

struct LpnResult {
  SparseSolution solution;
  double beta_star = std::numeric_limits<double>::quiet_NaN();
  double boundary_gap = 0.0;  // ||Ax - b|| - delta, signed
  double beta_low = 0.0;      // final bracket, residual(beta_low) <= delta
  double beta_high = 0.0;     //                residual(beta_high) >= delta
  LpnStatus status = LpnStatus::kOk;
  std::size_t probes = 0;  // residual evaluations spent
  bool converged = false;
};

struct ResidualProbe {
  double residual = 0.0;
  bool converged = false;
  SparseSolution solution;
};

/// ||A x(beta) - b|| where x(beta) solves the penalized problem at beta.
/// Non-convergence of the inner solve is flagged, not thrown.
ResidualProbe probe_residual(const DenseMatrix& A, const Vec& b, double beta,
                             const QpConfig& qp, const Vec* warm_start = nullptr);
double residual_at_beta(const DenseMatrix& A, const Vec& b, double beta,
                        const QpConfig& qp = {});

/// Minimize ||x||_1 subject to ||Ax - b|| <= delta, by root-finding on the
/// beta-parameterized residual. Returns the solution together with the
/// matching penalty weight beta_star (the beta whose penalized solution
/// coincides with the constrained one) and the final root bracket. Every
/// nonzero solution lands on the constraint boundary to within
/// boundary_tol * delta. Throws BracketError when delta is below the
/// smallest achievable residual.
LpnResult solve_lpn(const DenseMatrix& A, const Vec& b, double delta,
                    const LpnConfig& cfg = {});

}  // namespace betadelta
