#pragma once

// Thin FFTW wrapper. Plans are created once per (shape, direction) under a
// mutex and then executed through the new-array interface, which FFTW
// documents as thread safe.

#include <complex>
#include <vector>

namespace amalgam::detail {

enum class FftDirection { Forward, Backward };

/// Unnormalized in-place DFT of a row-major array with the given shape
/// (1 or 2 axes). Forward uses exp(-2 pi i kl/N).
void fft_inplace(std::complex<double>* data, const std::vector<int>& shape, FftDirection dir);

}  // namespace amalgam::detail
