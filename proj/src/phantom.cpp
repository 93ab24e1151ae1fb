#include "mammoscope/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mammoscope/error.hpp"
#include "mammoscope/rng.hpp"

namespace mammoscope {

void PhantomConfig::validate() const {
  auto bad = [](const std::string& why) { return Error(Errc::ConfigError, "phantom: " + why); };
  if (size < 32) throw bad("size must be at least 32");
  if (count_per_class == 0) throw bad("count_per_class must be positive");
  if (!(noise_sigma >= 0.0)) throw bad("noise_sigma must be non-negative");
  if (!(mass_amplitude > 0.0) || !(microcalc_amplitude > 0.0)) throw bad("amplitudes must be positive");
  if (!(mass_radius > 0.0) || !(mass_radius < static_cast<double>(size) / 4.0)) throw bad("mass_radius must be in (0, size/4)");
  if (microcalc_count < 3) throw bad("microcalc_count must be at least 3");
}

namespace {

struct Tissue {
  double semi_x = 0.0;  // horizontal semi-axis, ellipse anchored at column 0
  double semi_y = 0.0;
  double centre_y = 0.0;
  double freq_x = 1.0, freq_y = 1.0, phase_x = 0.0, phase_y = 0.0;

  double rho2(double x, double y) const {
    const double u = x / semi_x;
    const double v = (y - centre_y) / semi_y;
    return u * u + v * v;
  }

  double at(double x, double y, double n) const {
    const double r2 = rho2(x, y);
    if (r2 >= 1.0) return 0.0;
    const double texture = std::sin(2.0 * std::numbers::pi * freq_x * x / n + phase_x) *
                           std::sin(2.0 * std::numbers::pi * freq_y * y / n + phase_y);
    return 0.25 + 0.3 * std::sqrt(1.0 - r2) + 0.04 * texture;
  }
};

// A point well inside the tissue, at normalized elliptical radius in [0.15, 0.55].
std::pair<double, double> inner_point(const Tissue& t, Lcg64& rng) {
  const double r = 0.15 + 0.4 * rng.uniform();
  const double theta = (rng.uniform() - 0.5) * std::numbers::pi * 0.9;
  return {t.semi_x * r * std::cos(theta), t.centre_y + t.semi_y * r * std::sin(theta)};
}

}  // namespace

PhantomImage render_phantom(const PhantomConfig& cfg, std::size_t index) {
  cfg.validate();
  const std::size_t n = cfg.size;
  const double nd = static_cast<double>(n);
  Lcg64 rng(cfg.seed + index);

  PhantomImage p;
  p.index = index;
  p.label = index % 2 ? Label::suspicious : Label::normal;

  Tissue t;
  t.semi_x = nd * (0.55 + 0.1 * rng.uniform());
  t.semi_y = nd * (0.38 + 0.07 * rng.uniform());
  t.centre_y = nd * (0.5 + 0.04 * (rng.uniform() - 0.5));
  t.freq_x = 1.0 + 2.0 * rng.uniform();
  t.freq_y = 1.0 + 2.0 * rng.uniform();
  t.phase_x = 2.0 * std::numbers::pi * rng.uniform();
  t.phase_y = 2.0 * std::numbers::pi * rng.uniform();

  p.background = GrayImage(n, n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) p.background.at(x, y) = t.at(static_cast<double>(x), static_cast<double>(y), nd);
  GrayImage clean = p.background;

  if (p.label == Label::suspicious) {
    const auto [cx, cy] = inner_point(t, rng);
    p.lesion_x = cx;
    p.lesion_y = cy;
    if ((index / 2) % 2 == 0) {
      p.lesion = Lesion::mass;
      const double s = cfg.mass_radius / 2.0;
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) {
          const double dx = static_cast<double>(x) - cx;
          const double dy = static_cast<double>(y) - cy;
          clean.at(x, y) += cfg.mass_amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
        }
      }
    } else {
      p.lesion = Lesion::microcalc;
      const std::size_t count = 3 + rng.below(cfg.microcalc_count - 2);
      const double spread = cfg.mass_radius;
      for (std::size_t i = 0; i < count; ++i) {
        const double sx = cx + (2.0 * rng.uniform() - 1.0) * spread;
        const double sy = cy + (2.0 * rng.uniform() - 1.0) * spread;
        const bool pair = rng.uniform() < 0.5;
        const auto x = static_cast<std::size_t>(std::clamp(std::round(sx), 0.0, nd - 2.0));
        const auto y = static_cast<std::size_t>(std::clamp(std::round(sy), 0.0, nd - 1.0));
        p.specks.emplace_back(x, y);
        if (pair) p.specks.emplace_back(x + 1, y);
      }
      std::sort(p.specks.begin(), p.specks.end());
      p.specks.erase(std::unique(p.specks.begin(), p.specks.end()), p.specks.end());
      for (auto [x, y] : p.specks) clean.at(x, y) += cfg.microcalc_amplitude;
    }
  }

  if (cfg.artifact_label) {
    p.has_artifact = true;
    p.artifact = {n - 3 - n / 8, 3, n - 3, 3 + n / 16};
    for (std::size_t y = p.artifact.y0; y <= p.artifact.y1; ++y)
      for (std::size_t x = p.artifact.x0; x <= p.artifact.x1; ++x) clean.at(x, y) = 0.95;
  }

  p.image = GrayImage(n, n);
  for (std::size_t i = 0; i < clean.pixels.size(); ++i) {
    p.image.pixels[i] = std::clamp(clean.pixels[i] + cfg.noise_sigma * rng.normal(), 0.0, 1.0);
  }
  return p;
}

std::vector<PhantomImage> generate(const PhantomConfig& cfg) {
  cfg.validate();
  std::vector<PhantomImage> out;
  out.reserve(2 * cfg.count_per_class);
  for (std::size_t i = 0; i < 2 * cfg.count_per_class; ++i) out.push_back(render_phantom(cfg, i));
  return out;
}

std::string phantom_filename(const PhantomImage& p) {
  return "phantom_" + std::to_string(p.index) + "_" + std::string(to_string(p.label)) + ".pgm";
}

std::filesystem::path write_phantom_set(const std::filesystem::path& dir, const std::vector<PhantomImage>& images) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(Errc::IoError, "cannot create output directory '" + dir.string() + "'");
  }
  std::string manifest = "path,label\n";
  for (const auto& p : images) {
    const std::string name = phantom_filename(p);
    const auto bytes = write_pgm(p.image, 65535, true);
    write_file(dir / name, bytes);
    manifest += name + "," + std::string(to_string(p.label)) + "\n";
  }
  const auto path = dir / "manifest.csv";
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(manifest.data()), manifest.size()));
  return path;
}

}  // namespace mammoscope
