#include "betadelta/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace betadelta {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void write_csv_row(std::ostream& os, const Vec& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << format_double(values[i]);
  }
  os << '\n';
}

Vec parse_csv_row(const std::string& line, const char* what) {
  Vec out;
  const char* p = line.c_str();
  const char* end = p + line.size();
  while (p < end) {
    char* next = nullptr;
    const double v = std::strtod(p, &next);
    if (next == p) throw IoError(std::string("parse error in ") + what);
    out.push_back(v);
    p = next;
    if (p < end && *p == ',') ++p;
  }
  return out;
}

std::string get_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line)) throw IoError(std::string("unexpected end of file before ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

template <typename Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  fn(os);
  os.flush();
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace

void save_problem(std::ostream& os, const SensingProblem& p) {
  os << "betadelta-problem 1\n";
  os << p.m() << ' ' << p.n() << '\n';
  Vec row(p.n());
  for (std::size_t i = 0; i < p.m(); ++i) {
    row.assign(p.A.row(i), p.A.row(i) + p.n());
    write_csv_row(os, row);
  }
  write_csv_row(os, p.b);
  if (p.has_ground_truth()) {
    write_csv_row(os, p.x_true);
  } else {
    os << "none\n";
  }
  os << "sigma=" << format_double(p.sigma) << '\n';
  os << "sigma_w=" << format_double(p.sigma_w) << '\n';
  os << "delta=" << format_double(p.delta) << '\n';
  os << "seed=" << p.seed << '\n';
}

void save_problem(const std::string& path, const SensingProblem& p) {
  write_file(path, [&](std::ostream& os) { save_problem(os, p); });
}

SensingProblem load_problem(std::istream& is) {
  if (get_line(is, "header") != "betadelta-problem 1") {
    throw IoError("not a betadelta problem file (bad header)");
  }
  std::istringstream dims(get_line(is, "dimensions"));
  std::size_t m = 0, n = 0;
  if (!(dims >> m >> n) || m == 0 || n == 0) throw IoError("bad dimensions line");

  SensingProblem p;
  p.A = DenseMatrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec row = parse_csv_row(get_line(is, "matrix row"), "matrix row");
    if (row.size() != n) throw IoError("matrix row has wrong length");
    std::copy(row.begin(), row.end(), p.A.row(i));
  }
  p.b = parse_csv_row(get_line(is, "observation"), "observation");
  if (p.b.size() != m) throw IoError("observation has wrong length");

  const std::string xline = get_line(is, "ground truth");
  if (xline != "none") {
    p.x_true = parse_csv_row(xline, "ground truth");
    if (p.x_true.size() != n) throw IoError("ground truth has wrong length");
  }

  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("bad metadata line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "sigma") {
      p.sigma = std::strtod(value.c_str(), nullptr);
    } else if (key == "sigma_w") {
      p.sigma_w = std::strtod(value.c_str(), nullptr);
    } else if (key == "delta") {
      p.delta = std::strtod(value.c_str(), nullptr);
    } else if (key == "seed") {
      p.seed = std::strtoull(value.c_str(), nullptr, 10);
    } else {
      throw IoError("unknown metadata key: " + key);
    }
  }
  if (!all_finite(p.A) || !all_finite(p.b) || !all_finite(p.x_true)) {
    throw IoError("problem file contains non-finite entries");
  }
  return p;
}

SensingProblem load_problem(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  return load_problem(is);
}

void write_sweep_csv(std::ostream& os, const TrialReport& r) {
  os << "beta,g_value,qp_error,qp_residual,qp_k\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < r.betas.size(); ++j) {
    os << format_double(r.betas[j]) << ','
       << format_double(r.g_values.empty() ? nan : r.g_values[j]) << ','
       << format_double(r.qp_errors.empty() ? nan : r.qp_errors[j]) << ','
       << format_double(r.qp_residuals.empty() ? nan : r.qp_residuals[j]) << ','
       << (r.qp_support_sizes.empty() ? 0 : r.qp_support_sizes[j]) << '\n';
  }
}

void write_sweep_csv(const std::string& path, const TrialReport& r) {
  write_file(path, [&](std::ostream& os) { write_sweep_csv(os, r); });
}

void write_sweep_metadata(std::ostream& os, const TrialReport& r) {
  os << "n=" << r.params.n << '\n';
  os << "m=" << r.params.m << '\n';
  os << "k=" << r.params.k << '\n';
  os << "sigma=" << format_double(r.params.sigma) << '\n';
  os << "sigma_w=" << format_double(r.params.sigma_w) << '\n';
  os << "delta=" << format_double(r.delta) << '\n';
  os << "seed=" << r.seed << '\n';
  os << "lpn_l1=" << format_double(r.lpn_l1) << '\n';
  os << "lpn_error=" << format_double(r.lpn_error) << '\n';
  os << "beta_star=" << format_double(r.beta_star) << '\n';
  os << "beta_best=" << format_double(r.beta_best) << '\n';
  os << "bound_lower_exact=" << format_double(r.bounds_exact.lower) << '\n';
  os << "bound_upper_exact=" << format_double(r.bounds_exact.upper) << '\n';
  os << "bound_lower_gauss=" << format_double(r.bounds_gaussian.lower) << '\n';
  os << "bound_upper_gauss=" << format_double(r.bounds_gaussian.upper) << '\n';
}

void write_sweep_metadata(const std::string& path, const TrialReport& r) {
  write_file(path, [&](std::ostream& os) { write_sweep_metadata(os, r); });
}

void write_aggregate_csv(std::ostream& os, const AggregateReport& agg) {
  os << "beta,g_value,qp_error,qp_residual,qp_k\n";
  for (std::size_t j = 0; j < agg.betas.size(); ++j) {
    os << format_double(agg.betas[j]) << ','
       << format_double(agg.mean_g_curve[j]) << ','
       << format_double(agg.mean_qp_error_curve[j]) << ','
       << format_double(agg.mean_qp_residual_curve[j]) << ','
       << format_double(agg.mean_qp_support_curve[j]) << '\n';
  }
}

void write_aggregate_csv(const std::string& path, const AggregateReport& agg) {
  write_file(path, [&](std::ostream& os) { write_aggregate_csv(os, agg); });
}

void write_aggregate_metadata(std::ostream& os, const AggregateReport& agg,
                              const TrialParams& params, std::uint64_t master_seed) {
  os << "trials=" << agg.trial_count << '\n';
  os << "n=" << params.n << '\n';
  os << "m=" << params.m << '\n';
  os << "k=" << params.k << '\n';
  os << "sigma=" << format_double(params.sigma) << '\n';
  os << "sigma_w=" << format_double(params.sigma_w) << '\n';
  os << "seed=" << master_seed << '\n';
  os << "mean_lpn_l1=" << format_double(agg.mean_lpn_l1) << '\n';
  os << "mean_lpn_error=" << format_double(agg.mean_lpn_error) << '\n';
  os << "mean_beta_best=" << format_double(agg.mean_beta_best) << '\n';
  os << "bounds_coverage_rate=" << format_double(agg.bounds_coverage_rate) << '\n';
}

void write_aggregate_metadata(const std::string& path, const AggregateReport& agg,
                              const TrialParams& params, std::uint64_t master_seed) {
  write_file(path, [&](std::ostream& os) { write_aggregate_metadata(os, agg, params, master_seed); });
}

}  // namespace betadelta
