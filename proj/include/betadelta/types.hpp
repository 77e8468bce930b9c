#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace betadelta {

using Vec = std::vector<double>;

/// Dense real matrix, row-major storage.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec data;  // rows * cols entries, row-major

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  DenseMatrix(std::size_t r, std::size_t c, Vec entries);

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
};

bool all_finite(const Vec& v);
bool all_finite(const DenseMatrix& m);

/// One sensing instance: observation b = A x_true + w, noise bound delta.
/// x_true is empty for externally supplied problems.
struct SensingProblem {
  DenseMatrix A;  // m x n, m <= n
  Vec b;          // length m
  Vec x_true;     // length n, or empty
  double delta = 0.0;
  double sigma = 1.0;    // entry std-dev of A
  double sigma_w = 0.0;  // noise std-dev; delta = sqrt(m) * sigma_w when generated
  std::uint64_t seed = 0;

  std::size_t m() const { return A.rows; }
  std::size_t n() const { return A.cols; }
  bool has_ground_truth() const { return !x_true.empty(); }
};

/// An entry counts as nonzero when |x_i| > kSupportThresholdRel * ||x||_inf.
inline constexpr double kSupportThresholdRel = 1e-5;

std::vector<std::size_t> detect_support(const Vec& x);

struct SparseSolution {
  Vec x;
  std::vector<std::size_t> support;  // sorted indices of detected nonzeros
  std::size_t k = 0;                 // support.size()
  double residual_norm = 0.0;        // ||Ax - b||_2
  double kkt = 0.0;                  // optimality residual at exit
  std::size_t iterations = 0;
  bool converged = false;
};

/// Sign pattern of a reduced solution; entries are -1 or +1, squared norm == k.
struct SignVector {
  Vec values;
  std::size_t size() const { return values.size(); }
};

SignVector sign_pattern(const Vec& x, const std::vector<std::size_t>& support);

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleSupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace betadelta
