#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "mammoscope/matrix.hpp"

namespace mammoscope {

enum class FilterId { haar, daub4 };

std::string_view to_string(FilterId id) noexcept;
FilterId parse_filter_id(std::string_view name);

/// Orthonormal two-channel filter bank on the dyadic lattice (scale step 2, unit shift).
/// highpass[k] = (-1)^k * lowpass[L-1-k].
struct WaveletFilter {
  FilterId id = FilterId::haar;
  std::vector<double> lowpass;
  std::vector<double> highpass;

  std::size_t length() const noexcept { return lowpass.size(); }
};

WaveletFilter make_filter(FilterId id);

enum class Band { LL, HL, LH, HH };

std::string_view to_string(Band b) noexcept;

struct Subband {
  Band band = Band::LL;
  std::size_t level = 1;
  Matrix data;
};

struct DetailLevel {
  // Dimensions of the approximation fed into this level, before even-padding.
  std::size_t input_rows = 0;
  std::size_t input_cols = 0;
  Matrix hl;
  Matrix lh;
  Matrix hh;
};

struct WaveletDecomposition {
  FilterId filter = FilterId::haar;
  std::vector<DetailLevel> details;  // details[0] is level 1 (finest)
  Matrix ll;                          // final-level approximation

  std::size_t levels() const noexcept { return details.size(); }

  /// All 3 * levels + 1 subbands, finest level first, final LL last.
  std::vector<Subband> subbands() const;
};

struct QuadBands {
  Matrix ll, hl, lh, hh;
};

/// Periodic single-level analysis. approx[k] = sum_j low[j] * s[(2k + j) mod n].
std::pair<std::vector<double>, std::vector<double>> dwt1d(std::span<const double> signal, const WaveletFilter& f);

/// Left inverse of dwt1d (transpose of the orthonormal analysis operator).
std::vector<double> idwt1d(std::span<const double> approx, std::span<const double> detail, const WaveletFilter& f);

/// Rows first (x axis), then columns of each half (y axis).
/// HL = high along x / low along y (right-top), LH = low along x / high along y (left-bottom).
QuadBands dwt2d_level(const Matrix& m, const WaveletFilter& f);
Matrix idwt2d_level(const QuadBands& bands, const WaveletFilter& f);

/// Odd dimensions are extended by one replicated edge row and/or column.
std::pair<Matrix, std::pair<std::size_t, std::size_t>> pad_even(const Matrix& m);

/// Multi-level decomposition recursing on LL. Each level's input is even-padded
/// first; every level's unpadded input must be at least as long as the filter on
/// both axes, otherwise TooManyLevels.
WaveletDecomposition dwt2d(const Matrix& m, const WaveletFilter& f, std::size_t levels);

/// Reconstructs the original (unpadded) input of dwt2d.
Matrix idwt2d(const WaveletDecomposition& d);

}  // namespace mammoscope
