#pragma once

#include <complex>
#include <vector>

#include "mammoscope/matrix.hpp"

namespace mammoscope {

/// Unnormalized forward 2D DFT of an N x N real raster:
///   F(k,l) = sum_i sum_j f(i,j) exp(-2*pi*i*(k*i/N + l*j/N)).
struct Spectrum {
  std::size_t size = 0;
  std::vector<std::complex<double>> values;  // row-major N x N, row index = k

  std::complex<double>& operator()(std::size_t k, std::size_t l) { return values[k * size + l]; }
  std::complex<double> operator()(std::size_t k, std::size_t l) const { return values[k * size + l]; }
};

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

/// Direct O(N^4) summation. Requires a square input.
Spectrum dft2d_direct(const Matrix& m);

/// Row-column radix-2 FFT. The input is zero-padded into the top-left corner of
/// the smallest enclosing power-of-two square.
Spectrum fft2d(const Matrix& m);

/// In-place radix-2 FFT of a power-of-two length sequence (forward, unnormalized).
void fft1d(std::vector<std::complex<double>>& data);

/// log(1 + |F|), quadrant-swapped so the DC term sits at (N/2, N/2).
Matrix log_magnitude(const Spectrum& s);

}  // namespace mammoscope
