#include <doctest.h>

#include <algorithm>
#include <deque>

#include "mammoscope/error.hpp"
#include "mammoscope/phantom.hpp"
#include "mammoscope/preprocess.hpp"
#include "mammoscope/rng.hpp"

using namespace mammoscope;

namespace {

GrayImage random_image(Lcg64& rng, std::size_t w, std::size_t h) {
  GrayImage img(w, h);
  for (double& p : img.pixels) p = rng.uniform();
  return img;
}

// BFS from the first set bit; true if every set bit is reached.
bool is_4_connected(const BinaryMask& m) {
  auto first = std::find(m.bits.begin(), m.bits.end(), 1);
  if (first == m.bits.end()) return true;
  std::vector<bool> seen(m.bits.size());
  std::deque<std::size_t> q{static_cast<std::size_t>(first - m.bits.begin())};
  seen[q.front()] = true;
  std::size_t reached = 0;
  while (!q.empty()) {
    auto p = q.front();
    q.pop_front();
    ++reached;
    const std::size_t x = p % m.width, y = p / m.width;
    std::vector<std::size_t> nb;
    if (x) nb.push_back(p - 1);
    if (x + 1 < m.width) nb.push_back(p + 1);
    if (y) nb.push_back(p - m.width);
    if (y + 1 < m.height) nb.push_back(p + m.width);
    for (auto n : nb)
      if (m.bits[n] && !seen[n]) {
        seen[n] = true;
        q.push_back(n);
      }
  }
  return reached == static_cast<std::size_t>(std::count(m.bits.begin(), m.bits.end(), 1));
}

}  // namespace

TEST_SUITE("preprocess") {
  TEST_CASE("orient") {
    GrayImage right(4, 2, 0.0);
    right.at(3, 0) = 1.0;
    right.at(2, 1) = 0.5;
    CHECK(orient(right) == mirror(right));

    GrayImage left = mirror(right);
    CHECK(orient(left) == left);

    GrayImage sym(4, 1, std::vector<double>{0.2, 0.7, 0.7, 0.2});
    CHECK(orient(sym) == sym);
  }

  TEST_CASE("orient is idempotent and mirror invariant") {
    Lcg64 rng(3);
    for (int t = 0; t < 50; ++t) {
      GrayImage img = random_image(rng, 3 + rng.below(12), 1 + rng.below(12));
      CHECK(orient(orient(img)) == orient(img));
      double l = 0, r = 0;
      for (std::size_t y = 0; y < img.height; ++y) {
        for (std::size_t x = 0; x < img.width / 2; ++x) l += img.at(x, y);
        for (std::size_t x = (img.width + 1) / 2; x < img.width; ++x) r += img.at(x, y);
      }
      if (l != r) CHECK(orient(img) == orient(mirror(img)));
    }
  }

  TEST_CASE("threshold is inclusive") {
    GrayImage img(3, 1, std::vector<double>{0.1, 0.5, 0.9});
    CHECK(threshold(img, 0.5).bits == std::vector<std::uint8_t>{0, 1, 1});
    CHECK(threshold(img, 0.0).bits == std::vector<std::uint8_t>{1, 1, 1});
    GrayImage top(3, 1, std::vector<double>{1.0, 0.999, 1.0});
    CHECK(threshold(top, 1.0).bits == std::vector<std::uint8_t>{1, 0, 1});
  }

  TEST_CASE("largest_component keeps the biggest blob") {
    BinaryMask m(20, 10);
    for (std::size_t y = 0; y < 10; ++y)
      for (std::size_t x = 0; x < 10; ++x) m.bits[y * 20 + x] = 1;  // 100 pixels
    for (std::size_t x = 15; x < 18; ++x) m.bits[x] = 1;             // 3 pixels
    BinaryMask expect = m;
    for (std::size_t x = 15; x < 18; ++x) expect.bits[x] = 0;
    CHECK(largest_component(m) == expect);
    CHECK(largest_component(expect) == expect);
    CHECK(largest_component(BinaryMask(4, 4)) == BinaryMask(4, 4));
  }

  TEST_CASE("largest_component tie goes to smallest index") {
    BinaryMask m(5, 3);
    // Two 2-pixel components; the diagonal neighbour does not join them.
    m.bits[1 * 5 + 3] = m.bits[1 * 5 + 4] = 1;
    m.bits[2 * 5 + 0] = m.bits[2 * 5 + 1] = 1;
    BinaryMask expect(5, 3);
    expect.bits[1 * 5 + 3] = expect.bits[1 * 5 + 4] = 1;
    CHECK(largest_component(m) == expect);

    BinaryMask diag(2, 2);
    diag.bits = {1, 0, 0, 1};
    CHECK(largest_component(diag).bits == std::vector<std::uint8_t>{1, 0, 0, 0});
  }

  TEST_CASE("property: largest_component is a connected subset") {
    Lcg64 rng(5);
    for (int t = 0; t < 60; ++t) {
      BinaryMask m(1 + rng.below(15), 1 + rng.below(15));
      for (auto& b : m.bits) b = rng.uniform() < 0.45;
      const BinaryMask out = largest_component(m);
      for (std::size_t i = 0; i < m.bits.size(); ++i) CHECK(out.bits[i] <= m.bits[i]);
      CHECK(is_4_connected(out));
    }
  }

  TEST_CASE("apply_mask") {
    GrayImage ones(2, 2, 1.0);
    CHECK(apply_mask(ones, BinaryMask(2, 2, 1)) == ones);
    CHECK(apply_mask(ones, BinaryMask(2, 2, 0)) == GrayImage(2, 2, 0.0));
    BinaryMask checker(2, 2);
    checker.bits = {1, 0, 0, 1};
    CHECK(apply_mask(ones, checker).pixels == std::vector<double>{1, 0, 0, 1});
    CHECK_THROWS_AS(apply_mask(ones, BinaryMask(3, 2)), Error);
  }

  TEST_CASE("normalize_intensity") {
    auto n = normalize_intensity(GrayImage(3, 1, std::vector<double>{0.2, 0.4, 0.5}));
    CHECK(n.pixels[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(n.pixels[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(n.pixels[2] == 1.0);
    GrayImage already(2, 1, std::vector<double>{0.3, 1.0});
    CHECK(normalize_intensity(already) == already);
    try {
      normalize_intensity(GrayImage(3, 3, 0.0));
      FAIL("expected DegenerateImage");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DegenerateImage);
    }
    Lcg64 rng(9);
    for (int t = 0; t < 20; ++t) {
      auto img = random_image(rng, 7, 5);
      for (double& p : img.pixels) p *= 3.7;
      auto out = normalize_intensity(img);
      CHECK(*std::max_element(out.pixels.begin(), out.pixels.end()) == 1.0);
    }
  }

  TEST_CASE("pipeline removes the corner label and keeps the breast") {
    PhantomConfig cfg;
    cfg.artifact_label = true;
    for (std::size_t idx : {0u, 1u, 3u}) {
      const PhantomImage p = render_phantom(cfg, idx);
      const GrayImage out = preprocess_pipeline(p.image);
      for (std::size_t y = p.artifact.y0; y <= p.artifact.y1; ++y)
        for (std::size_t x = p.artifact.x0; x <= p.artifact.x1; ++x) CHECK(out.at(x, y) == 0.0);
      // Breast interior survives.
      CHECK(out.at(10, cfg.size / 2) > 0.0);
    }
  }

  TEST_CASE("pipeline fixed point and mirror invariance") {
    GrayImage clean(8, 4, 0.0);
    for (std::size_t y = 0; y < 4; ++y)
      for (std::size_t x = 0; x < 4; ++x) clean.at(x, y) = 0.5 + 0.1 * static_cast<double>(x + y);
    clean = normalize_intensity(clean);
    CHECK(preprocess_pipeline(clean) == clean);

    const PhantomImage p = render_phantom(PhantomConfig{}, 5);
    CHECK(preprocess_pipeline(p.image) == preprocess_pipeline(mirror(p.image)));
  }

  TEST_CASE("pipeline propagates DegenerateImage") {
    CHECK_THROWS_AS(preprocess_pipeline(GrayImage(4, 4, 0.0)), Error);
  }
}
