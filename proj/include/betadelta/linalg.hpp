#pragma once

#include "betadelta/types.hpp"

namespace betadelta {

double dot(const double* a, const double* b, std::size_t n);
double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
double norm1(const Vec& v);
double norm_inf(const Vec& v);

/// out = A x
void matvec(const DenseMatrix& A, const double* x, double* out);
Vec matvec(const DenseMatrix& A, const Vec& x);

/// out = A^T y
void matvec_transpose(const DenseMatrix& A, const double* y, double* out);
Vec matvec_transpose(const DenseMatrix& A, const Vec& y);

/// M^T M (cols x cols), exactly symmetric by construction.
DenseMatrix gram(const DenseMatrix& M);

struct EigenDecomposition {
  Vec values;           // descending
  DenseMatrix vectors;  // column j is the unit eigenvector for values[j]
};

/// Eigenvalues of a symmetric matrix, sorted descending. Cyclic Jacobi
/// rotations; converged when the off-diagonal Frobenius norm drops below
/// 1e-12 times the diagonal norm. Negative values within rounding noise of
/// zero are clamped to 0 so PSD inputs report a nonnegative spectrum.
Vec symmetric_eigenvalues(const DenseMatrix& M);

/// Same, keeping the accumulated rotations as eigenvectors.
EigenDecomposition symmetric_eigen(const DenseMatrix& M);

/// Cholesky solve for symmetric positive-definite M. Throws
/// SingularMatrixError when a pivot falls below 1e-12 times the largest
/// diagonal entry (rank-deficient or indefinite input).
Vec solve_spd(const DenseMatrix& M, const Vec& rhs);

/// Columns of A selected by `cols`, in the given order.
DenseMatrix submatrix_columns(const DenseMatrix& A, const std::vector<std::size_t>& cols);

}  // namespace betadelta
