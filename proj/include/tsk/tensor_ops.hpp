#pragma once

#include <span>

#include "tsk/types.hpp"

// Deterministic structured transforms: Kronecker / Hadamard / direct-sum /
// face-splitting products and the fast Walsh-Hadamard transform.
//
// Flat index convention, fixed project-wide: the Kronecker index of
// (i1, i2) is i1 * dim2 + i2 -- lexicographic with the leftmost factor most
// significant.

namespace tsk {

/// x (x) y, dimension dim(x)*dim(y).
DenseVector kron_vec(std::span<const double> x, std::span<const double> y);

/// Kronecker product of matrices; block (i,j) equals A(i,j) * B.
DenseMatrix kron_mat(const DenseMatrix& a, const DenseMatrix& b);

/// Entrywise product of equal-length vectors.
DenseVector hadamard_prod(std::span<const double> x, std::span<const double> y);

/// Concatenation.
DenseVector direct_sum(std::span<const double> x, std::span<const double> y);

/// Row-wise Kronecker product (transposed Khatri-Rao); requires equal row counts.
DenseMatrix face_split(const DenseMatrix& a, const DenseMatrix& b);

/// In-place unnormalized Walsh-Hadamard transform; length must be a power of
/// two. Applying it twice multiplies by the length. Parallelized for large
/// buffers; results are identical at any thread count.
void fwht(std::span<double> x);

/// Convenience wrapper that checks and transforms a DenseVector.
DenseVector fwht_inplace(DenseVector x);

}  // namespace tsk
