#include "mammoscope/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "mammoscope/error.hpp"

namespace mammoscope {
namespace {

// Twiddles e^{-2 pi i t / n} for t in [0, n), each evaluated directly.
std::vector<std::complex<double>> roots_of_unity(std::size_t n) {
  std::vector<std::complex<double>> w(n);
  for (std::size_t t = 0; t < n; ++t) {
    w[t] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n));
  }
  return w;
}

void fft_inplace(std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& w) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> u = a[start + k];
        const std::complex<double> v = a[start + k + half] * w[k * stride];
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft1d(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1))) throw Error(Errc::InvalidArgument, "FFT length must be a power of two");
  fft_inplace(data, roots_of_unity(n));
}

Spectrum dft2d_direct(const Matrix& m) {
  if (m.rows != m.cols || m.rows == 0) {
    throw Error(Errc::DimensionMismatch, "direct DFT needs a non-empty square input, got " + std::to_string(m.rows) +
                                             "x" + std::to_string(m.cols));
  }
  const std::size_t n = m.rows;
  const auto w = roots_of_unity(n);
  Spectrum s{n, std::vector<std::complex<double>>(n * n)};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * w[(k * i + l * j) % n];
      }
      s(k, l) = acc;
    }
  }
  return s;
}

Spectrum fft2d(const Matrix& m) {
  const std::size_t n = next_pow2(std::max<std::size_t>({m.rows, m.cols, 1}));
  const auto w = roots_of_unity(n);
  Spectrum s{n, std::vector<std::complex<double>>(n * n)};
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) s(r, c) = m(r, c);

  std::vector<std::complex<double>> line(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) line[c] = s(r, c);
    fft_inplace(line, w);
    for (std::size_t c = 0; c < n; ++c) s(r, c) = line[c];
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) line[r] = s(r, c);
    fft_inplace(line, w);
    for (std::size_t r = 0; r < n; ++r) s(r, c) = line[r];
  }
  return s;
}

Matrix log_magnitude(const Spectrum& s) {
  const std::size_t n = s.size;
  Matrix out(n, n);
  const std::size_t shift = n / 2;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) out((k + shift) % n, (l + shift) % n) = std::log1p(std::abs(s(k, l)));
  return out;
}

}  // namespace mammoscope
