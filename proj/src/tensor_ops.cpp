#include "tsk/tensor_ops.hpp"

#include <limits>

namespace tsk {

namespace {
std::size_t checked_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
        throw SizeError("result dimension overflows addressable size");
    return a * b;
}
}  // namespace

DenseVector kron_vec(std::span<const double> x, std::span<const double> y) {
    std::size_t n = checked_mul(x.size(), y.size());
    DenseVector out(n);
    std::size_t pos = 0;
    for (double xv : x)
        for (double yv : y) out[pos++] = xv * yv;
    return out;
}

DenseMatrix kron_mat(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(checked_mul(a.rows, b.rows), checked_mul(a.cols, b.cols));
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            double v = a(i, j);
            if (v == 0.0) continue;
            for (std::size_t k = 0; k < b.rows; ++k)
                for (std::size_t l = 0; l < b.cols; ++l)
                    out(i * b.rows + k, j * b.cols + l) = v * b(k, l);
        }
    return out;
}

DenseVector hadamard_prod(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ShapeError("hadamard_prod: dimension mismatch");
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
    return out;
}

DenseVector direct_sum(std::span<const double> x, std::span<const double> y) {
    DenseVector out;
    out.reserve(x.size() + y.size());
    out.insert(out.end(), x.begin(), x.end());
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

DenseMatrix face_split(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows != b.rows) throw ShapeError("face_split: row count mismatch");
    DenseMatrix out(a.rows, checked_mul(a.cols, b.cols));
    for (std::size_t i = 0; i < a.rows; ++i) {
        // Row i is exactly kron_vec(a_i, b_i): same multiplications.
        std::size_t pos = 0;
        double* dst = out.data.data() + i * out.cols;
        for (std::size_t j = 0; j < a.cols; ++j) {
            double av = a(i, j);
            for (std::size_t k = 0; k < b.cols; ++k) dst[pos++] = av * b(i, k);
        }
    }
    return out;
}

namespace {

inline void fwht_pass(double* p, std::size_t i, std::size_t len) {
    for (std::size_t j = i; j < i + len; ++j) {
        double a = p[j];
        double b = p[j + len];
        p[j] = a + b;
        p[j + len] = a - b;
    }
}

}  // namespace

void fwht(std::span<double> x) {
    std::size_t n = x.size();
    if (!is_pow2(n)) throw ShapeError("fwht: length must be a power of two");
    double* p = x.data();
    constexpr std::size_t kParallelAt = std::size_t{1} << 17;
    if (n < kParallelAt) {
        for (std::size_t len = 1; len < n; len <<= 1)
            for (std::size_t i = 0; i < n; i += len << 1) fwht_pass(p, i, len);
        return;
    }
#ifdef _OPENMP
    // One team for all passes; butterfly pairs are disjoint within a pass and
    // the implicit barriers order the passes, so results match the serial
    // loop bit for bit at any thread count.
#pragma omp parallel
    for (std::size_t len = 1; len < n; len <<= 1) {
        std::size_t step = len << 1;
        std::size_t blocks = n / step;
        if (blocks >= 8) {
#pragma omp for schedule(static)
            for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b)
                fwht_pass(p, static_cast<std::size_t>(b) * step, len);
        } else {
            for (std::size_t i = 0; i < n; i += step) {
#pragma omp for schedule(static)
                for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i);
                     j < static_cast<std::ptrdiff_t>(i + len); ++j) {
                    double a = p[j];
                    double b = p[j + len];
                    p[j] = a + b;
                    p[j + len] = a - b;
                }
            }
        }
    }
#else
    for (std::size_t len = 1; len < n; len <<= 1)
        for (std::size_t i = 0; i < n; i += len << 1) fwht_pass(p, i, len);
#endif
}

DenseVector fwht_inplace(DenseVector x) {
    fwht(std::span<double>(x));
    return x;
}

}  // namespace tsk
