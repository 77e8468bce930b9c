#include "betadelta/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace betadelta {

double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  return dot(a.data(), b.data(), a.size());
}

double norm2(const Vec& v) { return std::sqrt(dot(v.data(), v.data(), v.size())); }

double norm1(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm_inf(const Vec& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

void matvec(const DenseMatrix& A, const double* x, double* out) {
  for (std::size_t i = 0; i < A.rows; ++i) {
    out[i] = dot(A.row(i), x, A.cols);
  }
}

Vec matvec(const DenseMatrix& A, const Vec& x) {
  if (x.size() != A.cols) throw std::invalid_argument("matvec: size mismatch");
  Vec out(A.rows);
  matvec(A, x.data(), out.data());
  return out;
}

void matvec_transpose(const DenseMatrix& A, const double* y, double* out) {
  const std::size_t n = A.cols;
  std::fill(out, out + n, 0.0);
  for (std::size_t i = 0; i < A.rows; ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    const double* row = A.row(i);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      out[j] += yi * row[j];
      out[j + 1] += yi * row[j + 1];
      out[j + 2] += yi * row[j + 2];
      out[j + 3] += yi * row[j + 3];
    }
    for (; j < n; ++j) out[j] += yi * row[j];
  }
}

Vec matvec_transpose(const DenseMatrix& A, const Vec& y) {
  if (y.size() != A.rows) throw std::invalid_argument("matvec_transpose: size mismatch");
  Vec out(A.cols);
  matvec_transpose(A, y.data(), out.data());
  return out;
}

DenseMatrix gram(const DenseMatrix& M) {
  const std::size_t k = M.cols;
  DenseMatrix G(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < M.rows; ++r) s += M(r, i) * M(r, j);
      G(i, j) = s;
      G(j, i) = s;
    }
  }
  return G;
}

namespace {

void require_symmetric(const DenseMatrix& M) {
  if (M.rows != M.cols) throw std::invalid_argument("symmetric_eigen: matrix not square");
  double amax = 0.0;
  for (double v : M.data) amax = std::max(amax, std::abs(v));
  const double tol = 1e-10 * std::max(1.0, amax);
  for (std::size_t i = 0; i < M.rows; ++i) {
    for (std::size_t j = i + 1; j < M.cols; ++j) {
      if (std::abs(M(i, j) - M(j, i)) > tol) {
        throw std::invalid_argument("symmetric_eigen: matrix not symmetric");
      }
    }
  }
}

double off_diagonal_norm(const DenseMatrix& A) {
  double s = 0.0;
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) {
      if (i != j) s += A(i, j) * A(i, j);
    }
  }
  return std::sqrt(s);
}

double diagonal_norm(const DenseMatrix& A) {
  double s = 0.0;
  for (std::size_t i = 0; i < A.rows; ++i) s += A(i, i) * A(i, i);
  return std::sqrt(s);
}

// Cyclic Jacobi sweeps on a working copy; V accumulates rotations when given.
Vec jacobi_eigen(DenseMatrix A, DenseMatrix* V) {
  const std::size_t n = A.rows;
  if (V) {
    *V = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) (*V)(i, i) = 1.0;
  }
  constexpr std::size_t kMaxSweeps = 100;
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = off_diagonal_norm(A);
    const double diag = diagonal_norm(A);
    if (off <= 1e-12 * diag || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double app = A(p, p), aqq = A(q, q);
        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = A(r, p), arq = A(r, q);
            A(r, p) = arp - s * (arq + tau * arp);
            A(p, r) = A(r, p);
            A(r, q) = arq + s * (arp - tau * arq);
            A(q, r) = A(r, q);
          }
          if (V) {
            const double vrp = (*V)(r, p), vrq = (*V)(r, q);
            (*V)(r, p) = vrp - s * (vrq + tau * vrp);
            (*V)(r, q) = vrq + s * (vrp - tau * vrq);
          }
        }
      }
    }
  }

  Vec values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = A(i, i);

  // sort descending, permuting eigenvector columns alongside
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  Vec sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = values[order[i]];
  if (V) {
    DenseMatrix W(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) W(i, j) = (*V)(i, order[j]);
    }
    *V = std::move(W);
  }

  // clamp rounding-level negatives so PSD inputs stay nonnegative
  const double scale = sorted.empty() ? 1.0 : std::max(1.0, std::abs(sorted[0]));
  for (double& v : sorted) {
    if (v < 0.0 && v >= -1e-10 * scale) v = 0.0;
  }
  return sorted;
}

}  // namespace

Vec symmetric_eigenvalues(const DenseMatrix& M) {
  require_symmetric(M);
  return jacobi_eigen(M, nullptr);
}

EigenDecomposition symmetric_eigen(const DenseMatrix& M) {
  require_symmetric(M);
  EigenDecomposition d;
  d.values = jacobi_eigen(M, &d.vectors);
  return d;
}

Vec solve_spd(const DenseMatrix& M, const Vec& rhs) {
  if (M.rows != M.cols) throw std::invalid_argument("solve_spd: matrix not square");
  if (rhs.size() != M.rows) throw std::invalid_argument("solve_spd: size mismatch");
  const std::size_t n = M.rows;

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(M(i, i)));
  const double pivot_tol = 1e-12 * std::max(max_diag, 1e-300);

  DenseMatrix L(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = M(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= L(i, p) * L(j, p);
      if (i == j) {
        if (s <= pivot_tol) {
          throw SingularMatrixError("solve_spd: pivot below tolerance (matrix singular or indefinite)");
        }
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }

  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t p = 0; p < i; ++p) s -= L(i, p) * y[p];
    y[i] = s / L(i, i);
  }
  Vec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t p = ii + 1; p < n; ++p) s -= L(p, ii) * x[p];
    x[ii] = s / L(ii, ii);
  }
  return x;
}

DenseMatrix submatrix_columns(const DenseMatrix& A, const std::vector<std::size_t>& cols) {
  DenseMatrix S(A.rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] >= A.cols) throw std::invalid_argument("submatrix_columns: index out of range");
  }
  for (std::size_t i = 0; i < A.rows; ++i) {
    const double* row = A.row(i);
    double* srow = S.row(i);
    for (std::size_t j = 0; j < cols.size(); ++j) srow[j] = row[cols[j]];
  }
  return S;
}

}  // namespace betadelta
