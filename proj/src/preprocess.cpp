#include "mammoscope/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mammoscope/error.hpp"

namespace mammoscope {

GrayImage mirror(const GrayImage& img) {
  GrayImage out(img.width, img.height);
  for (std::size_t y = 0; y < img.height; ++y)
    for (std::size_t x = 0; x < img.width; ++x) out.at(img.width - 1 - x, y) = img.at(x, y);
  return out;
}

GrayImage orient(const GrayImage& img) {
  const std::size_t left_end = img.width / 2;
  const std::size_t right_begin = (img.width + 1) / 2;
  double left = 0.0;
  double right = 0.0;
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < left_end; ++x) left += img.at(x, y);
    for (std::size_t x = right_begin; x < img.width; ++x) right += img.at(x, y);
  }
  return right > left ? mirror(img) : img;
}

BinaryMask threshold(const GrayImage& img, double t) {
  BinaryMask mask(img.width, img.height);
  std::transform(img.pixels.begin(), img.pixels.end(), mask.bits.begin(),
                 [t](double p) { return static_cast<std::uint8_t>(p >= t); });
  return mask;
}

BinaryMask largest_component(const BinaryMask& mask) {
  const std::size_t w = mask.width;
  const std::size_t h = mask.height;
  std::vector<std::int32_t> label(mask.bits.size(), -1);
  std::vector<std::size_t> stack;
  std::int32_t best_label = -1;
  std::size_t best_size = 0;
  std::int32_t next_label = 0;

  for (std::size_t seed = 0; seed < mask.bits.size(); ++seed) {
    if (!mask.bits[seed] || label[seed] >= 0) continue;
    const std::int32_t current = next_label++;
    std::size_t size = 0;
    label[seed] = current;
    stack.push_back(seed);
    while (!stack.empty()) {
      std::size_t p = stack.back();
      stack.pop_back();
      ++size;
      const std::size_t x = p % w;
      const std::size_t y = p / w;
      auto visit = [&](std::size_t q) {
        if (mask.bits[q] && label[q] < 0) {
          label[q] = current;
          stack.push_back(q);
        }
      };
      if (x > 0) visit(p - 1);
      if (x + 1 < w) visit(p + 1);
      if (y > 0) visit(p - w);
      if (y + 1 < h) visit(p + w);
    }
    // Seeds are visited in row-major order, so strict '>' keeps the earliest on ties.
    if (size > best_size) {
      best_size = size;
      best_label = current;
    }
  }

  if (best_label < 0) return mask;
  BinaryMask out(w, h);
  for (std::size_t i = 0; i < label.size(); ++i) out.bits[i] = label[i] == best_label;
  return out;
}

GrayImage apply_mask(const GrayImage& img, const BinaryMask& mask) {
  if (img.width != mask.width || img.height != mask.height) {
    throw Error(Errc::DimensionMismatch, "mask is " + std::to_string(mask.width) + "x" + std::to_string(mask.height) +
                                             ", image is " + std::to_string(img.width) + "x" +
                                             std::to_string(img.height));
  }
  GrayImage out = img;
  for (std::size_t i = 0; i < out.pixels.size(); ++i)
    if (!mask.bits[i]) out.pixels[i] = 0.0;
  return out;
}

GrayImage normalize_intensity(const GrayImage& img) {
  if (img.pixels.empty()) throw Error(Errc::DegenerateImage, "empty image");
  const double peak = *std::max_element(img.pixels.begin(), img.pixels.end());
  if (!(peak > 0.0) || !std::isfinite(peak)) throw Error(Errc::DegenerateImage, "maximum pixel is not positive");
  GrayImage out = img;
  for (double& p : out.pixels) p /= peak;
  return out;
}

GrayImage preprocess_pipeline(const GrayImage& img, const PreprocessConfig& cfg) {
  GrayImage work = cfg.orient ? orient(img) : img;
  BinaryMask mask = threshold(work, cfg.threshold);
  if (cfg.artifact_removal) mask = largest_component(mask);
  return normalize_intensity(apply_mask(work, mask));
}

}  // namespace mammoscope
