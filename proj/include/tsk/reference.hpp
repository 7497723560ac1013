#pragma once

#include <bit>
#include <span>

#include "tsk/types.hpp"

// Serial reference kernels. These are the plain-loop implementations the
// optimized/parallel kernels are tested against; they are deliberately
// independent of the fast code paths (no shared transforms, no shared
// index tricks).

namespace tsk::ref {

/// y = M x, plain nested loops, single-threaded.
inline DenseVector matvec(const DenseMatrix& m, std::span<const double> x) {
    if (x.size() != m.cols) throw ShapeError("matvec: dimension mismatch");
    DenseVector y(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double s = 0.0;
        const double* row = m.data.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

/// H x for the unnormalized Hadamard matrix, entry H[i][j] = (-1)^popcount(i&j).
/// Quadratic; used as the oracle for the fast butterfly transform.
inline DenseVector hadamard_naive(std::span<const double> x) {
    std::size_t n = x.size();
    if (!is_pow2(n)) throw ShapeError("hadamard_naive: length must be a power of two");
    DenseVector y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double sign = (std::popcount(i & j) & 1u) ? -1.0 : 1.0;
            s += sign * x[j];
        }
        y[i] = s;
    }
    return y;
}

/// Circular convolution by the definition: out[k] = sum_{i+j = k mod n} x[i] y[j].
/// Works for any length; the FFT route is restricted to powers of two.
inline DenseVector convolve_naive(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ShapeError("convolve_naive: length mismatch");
    std::size_t n = x.size();
    DenseVector out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[(i + j) % n] += x[i] * y[j];
    return out;
}

}  // namespace tsk::ref
