#pragma once

#include <iosfwd>
#include <string>

#include "betadelta/experiment.hpp"
#include "betadelta/types.hpp"

namespace betadelta {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that round-trips the exact double value.
std::string format_double(double v);

/// Problem text format, one record per line:
///   betadelta-problem 1
///   <m> <n>
///   m matrix rows, comma-separated
///   b, comma-separated
///   x_true, comma-separated, or the literal `none`
///   key=value metadata (k, sigma, sigma_w, delta, seed)
void save_problem(std::ostream& os, const SensingProblem& p);
void save_problem(const std::string& path, const SensingProblem& p);
SensingProblem load_problem(std::istream& is);
SensingProblem load_problem(const std::string& path);

/// Sweep CSV: header `beta,g_value,qp_error,qp_residual,qp_k`, one row per
/// grid point, doubles in shortest round-trip form.
void write_sweep_csv(std::ostream& os, const TrialReport& r);
void write_sweep_csv(const std::string& path, const TrialReport& r);

/// Sidecar metadata, key=value per line, fixed key order:
/// n, m, k, sigma, sigma_w, delta, seed, lpn_l1, lpn_error, beta_star,
/// beta_best, bound_lower_exact, bound_upper_exact, bound_lower_gauss,
/// bound_upper_gauss.
void write_sweep_metadata(std::ostream& os, const TrialReport& r);
void write_sweep_metadata(const std::string& path, const TrialReport& r);

/// Aggregate curves in the same CSV column layout (pointwise means).
void write_aggregate_csv(std::ostream& os, const AggregateReport& agg);
void write_aggregate_csv(const std::string& path, const AggregateReport& agg);
void write_aggregate_metadata(std::ostream& os, const AggregateReport& agg,
                              const TrialParams& params, std::uint64_t master_seed);
void write_aggregate_metadata(const std::string& path, const AggregateReport& agg,
                              const TrialParams& params, std::uint64_t master_seed);

}  // namespace betadelta
