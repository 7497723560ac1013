#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "tsk/errors.hpp"

namespace tsk {

/// Dense double-precision vector; the dimension is the length.
using DenseVector = std::vector<double>;

/// Interleaved complex workspace for the FFT; length must be a power of two.
using ComplexBuffer = std::vector<std::complex<double>>;

/// Dense row-major double-precision matrix.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

inline unsigned log2_exact(std::size_t n) {
    unsigned k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

/// Product of dimensions with overflow detection.
inline std::size_t checked_dim_product(std::span<const std::size_t> dims) {
    std::size_t p = 1;
    for (std::size_t d : dims) {
        if (d != 0 && p > std::numeric_limits<std::size_t>::max() / d)
            throw SizeError("dimension product overflows addressable size");
        p *= d;
    }
    return p;
}

inline double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm_sq(std::span<const double> x) { return dot(x, x); }

inline double norm2(std::span<const double> x) { return std::sqrt(norm_sq(x)); }

inline double rel_err(double got, double want) {
    double scale = std::fabs(want);
    if (scale < 1e-300) return std::fabs(got - want);
    return std::fabs(got - want) / scale;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace tsk
