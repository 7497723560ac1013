#pragma once

#include <span>

#include "tsk/types.hpp"

// Small dense linear algebra for the verification harness: Gram-Schmidt
// orthonormalization, Jacobi eigenvalues of symmetric matrices, Cholesky
// solves. Sizes stay at desk scale (subspace dims <= 64, ridge systems
// <= a few thousand), so plain O(n^3) routines are appropriate.

namespace tsk {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// A^T B without forming A^T.
DenseMatrix transpose_matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseVector matvec(const DenseMatrix& a, std::span<const double> x);

double frobenius_norm(const DenseMatrix& a);

/// Orthonormalizes the columns in place (modified Gram-Schmidt, two passes).
/// Throws NumericError on rank deficiency.
void orthonormalize_columns(DenseMatrix& a);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
DenseVector symmetric_eigenvalues(DenseMatrix a);

/// Singular values of a (tall) matrix via the eigenvalues of its Gram
/// matrix, ascending.
DenseVector singular_values(const DenseMatrix& a);

/// Operator (spectral) norm of a symmetric matrix.
double operator_norm_symmetric(const DenseMatrix& a);

/// Solves (A + ridge I) x = b for symmetric positive definite A + ridge I by
/// Cholesky. Throws NumericError with guidance when the factorization
/// breaks down (e.g. ridge 0 on a singular system).
DenseVector cholesky_solve(DenseMatrix a, DenseVector b, double ridge);

}  // namespace tsk
