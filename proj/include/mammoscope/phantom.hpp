#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mammoscope/features.hpp"
#include "mammoscope/imgio.hpp"

namespace mammoscope {

struct PhantomConfig {
  std::size_t size = 128;
  std::size_t count_per_class = 100;
  std::uint64_t seed = 20240601;
  double noise_sigma = 0.02;
  double mass_amplitude = 0.35;
  double mass_radius = 6.0;
  std::size_t microcalc_count = 8;
  double microcalc_amplitude = 0.5;
  bool artifact_label = true;

  void validate() const;
};

enum class Lesion { none, mass, microcalc };

struct PixelRect {
  std::size_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive corners
  bool contains(std::size_t x, std::size_t y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

struct PhantomImage {
  std::size_t index = 0;
  Label label = Label::normal;
  Lesion lesion = Lesion::none;
  GrayImage image;       // final, clamped to [0, 1]
  GrayImage background;  // noise-free tissue without lesion or artifact
  double lesion_x = 0.0, lesion_y = 0.0;  // mass centre or cluster centre
  std::vector<std::pair<std::size_t, std::size_t>> specks;  // microcalc pixels (x, y)
  bool has_artifact = false;
  PixelRect artifact;
};

/// Image `index` of the set: even indices are normal, odd are suspicious;
/// suspicious images alternate mass / microcalcification cluster. Seeded with seed + index.
PhantomImage render_phantom(const PhantomConfig& cfg, std::size_t index);

/// All 2 * count_per_class images in index order.
std::vector<PhantomImage> generate(const PhantomConfig& cfg);

std::string phantom_filename(const PhantomImage& p);

/// Writes `phantom_<index>_<label>.pgm` (P5, maxval 65535) for each image plus
/// `manifest.csv` (`path,label`, paths relative to `dir`). Returns the manifest path.
std::filesystem::path write_phantom_set(const std::filesystem::path& dir, const std::vector<PhantomImage>& images);

}  // namespace mammoscope
