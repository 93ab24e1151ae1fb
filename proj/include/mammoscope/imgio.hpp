#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mammoscope/matrix.hpp"

namespace mammoscope {

/// Samples exactly as stored in a PGM file.
struct RawImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint32_t> samples;  // row-major

  bool operator==(const RawImage&) const = default;
};

/// Real-valued intensity raster, row-major. The pipeline's common currency.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;

  GrayImage() = default;
  GrayImage(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), pixels(w * h, fill) {}
  GrayImage(std::size_t w, std::size_t h, std::vector<double> p) : width(w), height(h), pixels(std::move(p)) {}

  double& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  double at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }

  bool operator==(const GrayImage&) const = default;
};

inline Matrix to_matrix(const GrayImage& img) { return Matrix(img.height, img.width, img.pixels); }
inline GrayImage to_image(const Matrix& m) { return GrayImage(m.cols, m.rows, m.values); }

/// Parses a P2 (ASCII) or P5 (binary) PGM. '#' comments are accepted anywhere in
/// the header. P5 files with maxval > 255 carry big-endian 16-bit samples.
RawImage read_pgm(std::span<const std::uint8_t> bytes);
RawImage read_pgm_file(const std::filesystem::path& path);

/// Encodes `raw` exactly; header tokens are separated by a single '\n'.
std::vector<std::uint8_t> encode_pgm(const RawImage& raw, bool binary);

/// pixels[i] = samples[i] / maxval.
GrayImage to_gray(const RawImage& raw);

/// Quantizes pixel p to floor(p * maxval + 0.5) (round half up), clamped to [0, maxval].
RawImage quantize(const GrayImage& img, std::uint32_t maxval);

std::vector<std::uint8_t> write_pgm(const GrayImage& img, std::uint32_t maxval, bool binary);

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace mammoscope
