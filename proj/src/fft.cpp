#include "tsk/fft.hpp"

#include <cmath>
#include <numbers>

namespace tsk {

namespace {

void bit_reverse_permute(ComplexBuffer& buf) {
    std::size_t n = buf.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(buf[i], buf[j]);
    }
}

}  // namespace

void fft_inplace(ComplexBuffer& buf, bool inverse) {
    std::size_t n = buf.size();
    if (!is_pow2(n)) throw ShapeError("fft: length must be a power of two");
    if (n == 1) return;

    bit_reverse_permute(buf);

    // Twiddles indexed off one table so no rounding accumulates across stages.
    ComplexBuffer twiddle(n / 2);
    double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle[k] = {std::cos(ang), std::sin(ang)};
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> w = twiddle[j * stride];
                std::complex<double> u = buf[i + j];
                std::complex<double> v = buf[i + j + len / 2] * w;
                buf[i + j] = u + v;
                buf[i + j + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        double inv_n = 1.0 / static_cast<double>(n);
        for (auto& z : buf) z *= inv_n;
    }
}

DenseVector circular_convolve(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ShapeError("circular_convolve: dimension mismatch");
    if (!is_pow2(x.size())) throw ShapeError("circular_convolve: length must be a power of two");
    std::size_t n = x.size();

    ComplexBuffer fx(n), fy(n);
    for (std::size_t i = 0; i < n; ++i) fx[i] = x[i];
    for (std::size_t i = 0; i < n; ++i) fy[i] = y[i];
    fft_inplace(fx, false);
    fft_inplace(fy, false);
    for (std::size_t i = 0; i < n; ++i) fx[i] *= fy[i];
    fft_inplace(fx, true);

    DenseVector out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fx[i].real();
    return out;
}

}  // namespace tsk
