#pragma once

#include <span>

#include "tsk/types.hpp"

namespace tsk {

/// Iterative radix-2 complex FFT. Length must be a power of two.
/// The inverse transform carries the 1/n normalization.
void fft_inplace(ComplexBuffer& buf, bool inverse);

/// Circular convolution of equal-length power-of-two real vectors via
/// forward FFT, entrywise complex multiply, inverse FFT.
DenseVector circular_convolve(std::span<const double> x, std::span<const double> y);

}  // namespace tsk
