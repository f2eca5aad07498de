#pragma once

#include <complex>

namespace fracspace {

/// In-place complex-to-complex FFT on a row-major array: n_dim=1 acts on
/// length-N data, n_dim=2 on an N-by-N block.  Plans are cached per shape and
/// direction; execution on distinct arrays is thread-safe.
void fft_forward(std::complex<double>* data, int n_dim, int N);

/// Unnormalized inverse transform; callers divide by N^n_dim.
void fft_backward(std::complex<double>* data, int n_dim, int N);

}  // namespace fracspace
