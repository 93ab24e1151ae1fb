// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "unit/oracles.hpp"
#include "mammoscope/error.hpp"
#include "mammoscope/pipeline.hpp"
#include "mammoscope/fourier.hpp"
#include "mammoscope/rng.hpp"
#include "mammoscope/wavelet.hpp"

using namespace mammoscope;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Matrix random_matrix(Lcg64& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (double& v : m.values) v = 2.0 * rng.uniform() - 1.0;
  return m;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

Outcome worked_examples() {
  const double sens = sensitivity({90, 0, 0, 10});
  const double spec = specificity({0, 180, 720, 0});
  return {sens == 0.90 && spec == 0.80, fmt("sensitivity=%.17g specificity=%.17g", sens, spec)};
}

Outcome reconstruction() {
  Lcg64 rng(1001);
  double worst = 0, worst_const = 0;
  for (FilterId id : {FilterId::haar, FilterId::daub4}) {
    const auto f = make_filter(id);
    for (std::size_t levels = 1; levels <= 3; ++levels) {
      for (int t = 0; t < 5; ++t) {
        const Matrix m = random_matrix(rng, 64, 64);
        const Matrix back = idwt2d(dwt2d(m, f, levels));
        for (std::size_t i = 0; i < m.size(); ++i) worst = std::max(worst, std::abs(back.values[i] - m.values[i]));
      }
      const auto d = dwt2d(Matrix(64, 64, 0.37), f, levels);
      for (const auto& lvl : d.details)
        for (const Matrix* b : {&lvl.hl, &lvl.lh, &lvl.hh})
          for (double v : b->values) worst_const = std::max(worst_const, std::abs(v));
    }
  }
  return {worst < 1e-9 && worst_const < 1e-12, fmt("max roundtrip error=%.3g, max constant detail=%.3g", worst, worst_const)};
}

Outcome energy_conservation() {
  Lcg64 rng(1002);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const Matrix m = random_matrix(rng, 16, 16);
    for (FilterId id : {FilterId::haar, FilterId::daub4}) {
      const auto q = dwt2d_level(m, make_filter(id));
      const double in = energy(m);
      const double out = energy(q.ll) + energy(q.hl) + energy(q.lh) + energy(q.hh);
      worst = std::max(worst, std::abs(in - out) / in);
    }
  }
  return {worst <= 1e-12, fmt("max relative energy error=%.3g over 100 cases per filter", worst)};
}

Outcome fourier_oracle() {
  Lcg64 rng(1003);
  double rel = 0, parseval = 0, dc = 0;
  auto run = [&](std::size_t n, int count) {
    for (int t = 0; t < count; ++t) {
      Matrix m(n, n);
      for (double& v : m.values) v = rng.uniform();
      const auto fast = fft2d(m);
      const auto direct = dft2d_direct(m);
      double ef = 0, e = 0, sum = 0;
      for (std::size_t i = 0; i < fast.values.size(); ++i) {
        rel = std::max(rel, std::abs(fast.values[i] - direct.values[i]) / std::max(std::abs(direct.values[i]), 1e-300));
        ef += std::norm(fast.values[i]);
      }
      for (double v : m.values) {
        e += v * v;
        sum += v;
      }
      parseval = std::max(parseval, std::abs(ef / static_cast<double>(n * n) - e) / e);
      dc = std::max(dc, std::abs(fast(0, 0) - std::complex<double>(sum)) / sum);
    }
  };
  run(8, 25);
  run(16, 5);
  return {rel < 1e-9 && parseval < 1e-9 && dc < 1e-12,
          fmt("max entry rel error=%.3g, Parseval rel error=%.3g, DC rel error=%.3g", rel, parseval, dc)};
}

Outcome moment_oracles() {
  Lcg64 rng(1004);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    Matrix m(32, 32);
    for (double& v : m.values) v = rng.uniform() * rng.uniform();
    const auto o = oracle::two_pass_moments(m.values);
    const Moments got = moments(m);
    worst = std::max({worst, std::abs(got.mean - o.mean), std::abs(got.stddev - o.stddev),
                      std::abs(got.skewness - o.skewness), std::abs(got.kurtosis - o.kurtosis)});
  }
  const Matrix anchor(1, 4, std::vector<double>{0, 0, 0, 4});
  const double ds = std::abs(skewness(anchor) - 2.0 / std::sqrt(3.0));
  const double dk = std::abs(kurtosis(anchor) - 21.0 / 9.0);
  return {worst < 1e-12 && ds < 1e-12 && dk < 1e-12,
          fmt("max oracle deviation=%.3g, skew anchor error=%.3g, kurt anchor error=%.3g", worst, ds, dk)};
}

Outcome naive_bayes() {
  // Single feature: normal mean -1, suspicious mean +1, unit variances, equal priors.
  FeatureTable t{{"f"}, {}};
  t.rows = {{"a", Label::normal, {-2}}, {"b", Label::normal, {0}}, {"c", Label::suspicious, {0}}, {"d", Label::suspicious, {2}}};
  const auto m = train(t);
  const double p1 = posterior(m, std::vector<double>{1.0}).suspicious;
  const double hand = 1.0 / (1.0 + std::exp(-2.0));
  const double p0 = posterior(m, std::vector<double>{0.0}).suspicious;

  Lcg64 rng(1006);
  FeatureTable big{{"a", "b", "c", "d"}, {}};
  for (int i = 0; i < 40; ++i) {
    const Label l = i % 2 ? Label::suspicious : Label::normal;
    std::vector<double> v;
    for (int f = 0; f < 4; ++f) v.push_back(rng.normal() * (1 + f) + (l == Label::suspicious ? 1.0 : 0.0));
    big.rows.push_back({std::to_string(i), l, v});
  }
  const auto mb = train(big);
  double sum_err = 0;
  for (int q = 0; q < 1000; ++q) {
    std::vector<double> x(4);
    for (double& v : x) v = 6 * rng.normal();
    const auto p = posterior(mb, x);
    sum_err = std::max(sum_err, std::abs(p.normal + p.suspicious - 1.0));
  }
  const bool round_trip = load_model(save_model(mb)) == mb && load_model(save_model(m)) == m;
  return {std::abs(p1 - hand) < 1e-12 && std::abs(p0 - 0.5) < 1e-12 && sum_err < 1e-12 && round_trip,
          fmt("P(suspicious|x=1)=%.17g (hand %.17g), max |sum-1|=%.3g", p1, hand, sum_err) +
              (round_trip ? ", save/load exact" : ", save/load MISMATCH")};
}

Outcome auc_identity() {
  Lcg64 rng(1007);
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 10 + rng.below(91);
    std::vector<double> s(n);
    std::vector<Label> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = rng.uniform();
      y[i] = rng.uniform() < 0.5 ? Label::suspicious : Label::normal;
    }
    y[0] = Label::suspicious;
    y[1] = Label::normal;
    // Inject ties, including ties across classes.
    for (std::size_t i = 0; i < n / 3; ++i) s[rng.below(n)] = s[rng.below(n)];
    s[1] = s[0];
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (y[i] == Label::suspicious && y[j] == Label::normal) {
          pairs += 1;
          wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
        }
    worst = std::max(worst, std::abs(roc(s, y).auc - wins / pairs));
  }
  return {worst < 1e-12, fmt("max |AUC - Mann-Whitney|=%.3g over 50 sets", worst)};
}

struct RunArtifacts {
  std::string features_csv, model, roc_csv;
  EvaluationReport report;
};

RunArtifacts phantom_experiment(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir / "images");
  PipelineConfig cfg;  // defaults: 128x128, 100 per class, fixed seed, 8 features, 5 folds, threshold 0.5
  write_phantom_set(dir / "images", generate(cfg.phantom));
  const auto extracted = extract_manifest(read_manifest(dir / "images" / "manifest.csv"), cfg, 1);
  if (!extracted.failures.empty()) throw Error(Errc::IoError, "extraction failed for " + extracted.failures[0].id);

  RunArtifacts a;
  a.features_csv = write_feature_csv(extracted.table);
  write_text(dir / "features.csv", a.features_csv);
  const auto table = read_feature_csv(slurp(dir / "features.csv"));
  a.model = save_model(train_model(table, cfg));
  write_text(dir / "model.txt", a.model);
  a.report = evaluate(table, cfg, 1);
  a.roc_csv = roc_csv(a.report.roc);
  write_text(dir / "roc.csv", a.roc_csv);
  return a;
}

fs::path g_workdir;
RunArtifacts g_first;

Outcome end_to_end() {
  g_first = phantom_experiment(g_workdir / "run1");
  const auto& r = g_first.report;
  return {r.roc.auc >= 0.90 && r.specificity >= 0.85 && r.confusion.total() == 200,
          fmt("pooled AUC=%.4f, specificity=%.4f, sensitivity=%.4f", r.roc.auc, r.specificity, r.sensitivity)};
}

Outcome determinism() {
  const auto second = phantom_experiment(g_workdir / "run2");
  const bool f = second.features_csv == g_first.features_csv && slurp(g_workdir / "run1/features.csv") == slurp(g_workdir / "run2/features.csv");
  const bool m = second.model == g_first.model && slurp(g_workdir / "run1/model.txt") == slurp(g_workdir / "run2/model.txt");
  const bool r = second.roc_csv == g_first.roc_csv && slurp(g_workdir / "run1/roc.csv") == slurp(g_workdir / "run2/roc.csv");
  std::string detail = std::string("features ") + (f ? "identical" : "DIFFER") + ", model " + (m ? "identical" : "DIFFER") +
                       ", roc " + (r ? "identical" : "DIFFER");
  return {f && m && r && !g_first.features_csv.empty(), detail};
}

Outcome preprocessing() {
  PipelineConfig cfg;
  cfg.phantom.artifact_label = true;
  std::size_t leaked = 0, checked = 0;
  double worst = 0;
  for (std::size_t idx = 0; idx < 20; ++idx) {
    const auto p = render_phantom(cfg.phantom, idx);
    const auto clean = preprocess_pipeline(p.image, cfg.preprocess);
    for (std::size_t y = p.artifact.y0; y <= p.artifact.y1; ++y)
      for (std::size_t x = p.artifact.x0; x <= p.artifact.x1; ++x) {
        ++checked;
        leaked += clean.at(x, y) != 0.0;
      }
    const auto a = process_image(p.image, cfg);
    const auto b = process_image(mirror(p.image), cfg);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      worst = std::max(worst, std::abs(a.values[i] - b.values[i]) / std::max(1.0, std::abs(a.values[i])));
  }
  return {leaked == 0 && checked > 0 && worst <= 1e-9,
          fmt("%.0f of %.0f artifact pixels nonzero, max mirrored feature difference=%.3g", static_cast<double>(leaked),
              static_cast<double>(checked), worst)};
}

}  // namespace

int main(int argc, char** argv) {
  g_workdir = fs::temp_directory_path() / "mammoscope_acceptance";
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--workdir") g_workdir = argv[i + 1];

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"worked-example sensitivity/specificity", worked_examples},
      {"wavelet perfect reconstruction", reconstruction},
      {"wavelet energy conservation", energy_conservation},
      {"FFT matches direct DFT", fourier_oracle},
      {"moments match two-pass oracle", moment_oracles},
      {"naive Bayes correctness", naive_bayes},
      {"AUC equals Mann-Whitney", auc_identity},
      {"end-to-end phantom experiment", end_to_end},
      {"byte-identical reruns", determinism},
      {"preprocessing artifact removal and mirror invariance", preprocessing},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %zu: %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
