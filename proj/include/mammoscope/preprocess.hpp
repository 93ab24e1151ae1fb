#pragma once

#include <cstdint>
#include <vector>

#include "mammoscope/imgio.hpp"

namespace mammoscope {

struct BinaryMask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> bits;  // row-major, 0 or 1

  BinaryMask() = default;
  BinaryMask(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), bits(w * h, fill) {}

  bool operator==(const BinaryMask&) const = default;
};

struct PreprocessConfig {
  double threshold = 0.1;
  bool orient = true;
  bool artifact_removal = true;
};

GrayImage mirror(const GrayImage& img);

/// Canonical orientation puts tissue on the left: the image is mirrored when the
/// intensity mass of columns >= ceil(w/2) strictly exceeds that of columns < floor(w/2).
GrayImage orient(const GrayImage& img);

/// bit = pixel >= t.
BinaryMask threshold(const GrayImage& img, double t);

/// Keeps only the largest 4-connected foreground component. Ties go to the
/// component containing the smallest row-major index.
BinaryMask largest_component(const BinaryMask& mask);

GrayImage apply_mask(const GrayImage& img, const BinaryMask& mask);

/// Divides by the maximum pixel so the brightest pixel becomes exactly 1.0.
GrayImage normalize_intensity(const GrayImage& img);

/// orient -> threshold -> largest_component -> apply_mask -> normalize_intensity.
GrayImage preprocess_pipeline(const GrayImage& img, const PreprocessConfig& cfg = {});

}  // namespace mammoscope
