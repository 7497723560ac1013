#include "tsk/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "tsk/parallel.hpp"

namespace tsk {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) throw ShapeError("matmul: inner dimension mismatch");
    DenseMatrix out(a.rows, b.cols);
    parallel_for_index(a.rows, a.rows * a.cols * b.cols, std::size_t{1} << 20,
                       [&](std::size_t i) {
                           double* dst = out.data.data() + i * b.cols;
                           for (std::size_t k = 0; k < a.cols; ++k) {
                               double av = a(i, k);
                               if (av == 0.0) continue;
                               const double* brow = b.data.data() + k * b.cols;
                               for (std::size_t j = 0; j < b.cols; ++j) dst[j] += av * brow[j];
                           }
                       });
    return out;
}

DenseMatrix transpose_matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows != b.rows) throw ShapeError("transpose_matmul: row count mismatch");
    DenseMatrix out(a.cols, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* arow = a.data.data() + k * a.cols;
        const double* brow = b.data.data() + k * b.cols;
        for (std::size_t i = 0; i < a.cols; ++i) {
            double av = arow[i];
            if (av == 0.0) continue;
            double* dst = out.data.data() + i * b.cols;
            for (std::size_t j = 0; j < b.cols; ++j) dst[j] += av * brow[j];
        }
    }
    return out;
}

DenseVector matvec(const DenseMatrix& a, std::span<const double> x) {
    if (x.size() != a.cols) throw ShapeError("matvec: dimension mismatch");
    DenseVector y(a.rows, 0.0);
    parallel_for_index(a.rows, a.rows * a.cols, std::size_t{1} << 18, [&](std::size_t i) {
        const double* row = a.data.data() + i * a.cols;
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += row[j] * x[j];
        y[i] = s;
    });
    return y;
}

double frobenius_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return std::sqrt(s);
}

void orthonormalize_columns(DenseMatrix& a) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < a.cols; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                double proj = 0.0;
                for (std::size_t i = 0; i < a.rows; ++i) proj += a(i, j) * a(i, k);
                for (std::size_t i = 0; i < a.rows; ++i) a(i, j) -= proj * a(i, k);
            }
            double n = 0.0;
            for (std::size_t i = 0; i < a.rows; ++i) n += a(i, j) * a(i, j);
            n = std::sqrt(n);
            if (n < 1e-12) throw NumericError("orthonormalize_columns: rank-deficient basis");
            for (std::size_t i = 0; i < a.rows; ++i) a(i, j) /= n;
        }
    }
}

DenseVector symmetric_eigenvalues(DenseMatrix a) {
    if (a.rows != a.cols) throw ShapeError("symmetric_eigenvalues: matrix must be square");
    std::size_t n = a.rows;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double cos_r = 1.0 / std::sqrt(t * t + 1.0);
                double sin_r = t * cos_r;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = cos_r * akp - sin_r * akq;
                    a(k, q) = sin_r * akp + cos_r * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cos_r * apk - sin_r * aqk;
                    a(q, k) = sin_r * apk + cos_r * aqk;
                }
            }
    }
    DenseVector eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

DenseVector singular_values(const DenseMatrix& a) {
    DenseMatrix gram = transpose_matmul(a, a);
    DenseVector eig = symmetric_eigenvalues(std::move(gram));
    for (double& v : eig) v = std::sqrt(std::max(0.0, v));
    return eig;
}

double operator_norm_symmetric(const DenseMatrix& a) {
    DenseVector eig = symmetric_eigenvalues(a);
    double m = 0.0;
    for (double v : eig) m = std::max(m, std::fabs(v));
    return m;
}

DenseVector cholesky_solve(DenseMatrix a, DenseVector b, double ridge) {
    if (a.rows != a.cols || a.rows != b.size())
        throw ShapeError("cholesky_solve: shape mismatch");
    std::size_t n = a.rows;
    for (std::size_t i = 0; i < n; ++i) a(i, i) += ridge;

    // In-place lower Cholesky.
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
        if (diag <= 0.0)
            throw NumericError(
                "cholesky_solve: system is not positive definite; "
                "a positive ridge regularizer is required");
        diag = std::sqrt(diag);
        a(j, j) = diag;
        std::size_t below = n - j - 1;
        parallel_for_index(below, below * j, std::size_t{1} << 16, [&](std::size_t off) {
            std::size_t i = j + 1 + off;
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / diag;
        });
    }
    // Forward then backward substitution.
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * b[k];
        b[i] = s / a(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a(k, i) * b[k];
        b[i] = s / a(i, i);
    }
    return b;
}

}  // namespace tsk
