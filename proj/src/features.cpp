#include "mammoscope/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "mammoscope/error.hpp"
#include "mammoscope/fourier.hpp"
#include "mammoscope/numfmt.hpp"

namespace mammoscope {

namespace {

constexpr double kDegenerateSigma = 1e-12;

// Single-pass central moment accumulator (pairwise-update form, numerically
// stable for the third and fourth moments).
struct MomentAccumulator {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  void add(double x) {
    const double n1 = n;
    n += 1.0;
    const double delta = x - mean;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean += delta_n;
    m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
    m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2;
    m2 += term1;
  }
};

MomentAccumulator accumulate(const Matrix& map) {
  if (map.empty()) throw Error(Errc::EmptyMap, "moment of an empty map");
  MomentAccumulator acc;
  for (double v : map.values) acc.add(v);
  return acc;
}

Moments finish(const MomentAccumulator& acc) {
  Moments out;
  out.mean = acc.mean;
  const double var = acc.m2 / acc.n;
  out.stddev = std::sqrt(var);
  if (out.stddev > kDegenerateSigma) {
    out.skewness = (acc.m3 / acc.n) / (var * out.stddev);
    out.kurtosis = (acc.m4 / acc.n) / (var * var);
  }
  return out;
}

}  // namespace

std::string_view to_string(Label l) noexcept { return l == Label::normal ? "normal" : "suspicious"; }

Label parse_label(std::string_view s) {
  if (s == "normal") return Label::normal;
  if (s == "suspicious") return Label::suspicious;
  throw Error(Errc::InvalidArgument, "unknown label '" + std::string(s) + "'");
}

Moments moments(const Matrix& map) { return finish(accumulate(map)); }
double mean(const Matrix& map) { return moments(map).mean; }
double stddev(const Matrix& map) { return moments(map).stddev; }
double skewness(const Matrix& map) { return moments(map).skewness; }
double kurtosis(const Matrix& map) { return moments(map).kurtosis; }

Matrix resample_bilinear(const Matrix& m, std::size_t rows, std::size_t cols) {
  if (m.empty()) throw Error(Errc::EmptyMap, "resampling an empty map");
  if (m.rows == rows && m.cols == cols) return m;
  Matrix out(rows, cols);
  const double sy = static_cast<double>(m.rows) / static_cast<double>(rows);
  const double sx = static_cast<double>(m.cols) / static_cast<double>(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = std::clamp((static_cast<double>(r) + 0.5) * sy - 0.5, 0.0, static_cast<double>(m.rows - 1));
    const std::size_t y0 = static_cast<std::size_t>(y);
    const std::size_t y1 = std::min(y0 + 1, m.rows - 1);
    const double fy = y - static_cast<double>(y0);
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = std::clamp((static_cast<double>(c) + 0.5) * sx - 0.5, 0.0, static_cast<double>(m.cols - 1));
      const std::size_t x0 = static_cast<std::size_t>(x);
      const std::size_t x1 = std::min(x0 + 1, m.cols - 1);
      const double fx = x - static_cast<double>(x0);
      const double top = m(y0, x0) * (1.0 - fx) + m(y0, x1) * fx;
      const double bottom = m(y1, x0) * (1.0 - fx) + m(y1, x1) * fx;
      out(r, c) = top * (1.0 - fy) + bottom * fy;
    }
  }
  return out;
}

double cross_correlation(const Matrix& a, const Matrix& b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptyMap, "cross-correlation of an empty map");
  const Matrix bb = resample_bilinear(b, a.rows, a.cols);
  const Moments ma = moments(a);
  const Moments mb = moments(bb);
  if (ma.stddev <= kDegenerateSigma || mb.stddev <= kDegenerateSigma) return 0.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a.values[i] - ma.mean;
    const double db = bb.values[i] - mb.mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::string_view to_string(FeatureMode m) noexcept { return m == FeatureMode::default8 ? "default8" : "extended"; }

FeatureMode parse_feature_mode(std::string_view s) {
  if (s == "default8") return FeatureMode::default8;
  if (s == "extended") return FeatureMode::extended;
  throw Error(Errc::InvalidArgument, "unknown feature mode '" + std::string(s) + "'");
}

double FeatureVector::at(std::string_view name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(Errc::FeatureMismatch, "no feature named '" + std::string(name) + "'");
  return values[static_cast<std::size_t>(it - names.begin())];
}

namespace {

constexpr std::string_view kStatSuffix[] = {"_mean", "_std", "_skew", "_kurt"};

void push_moments(FeatureVector& fv, const std::string& prefix, const Matrix& map) {
  const Moments m = moments(map);
  const double v[] = {m.mean, m.stddev, m.skewness, m.kurtosis};
  for (std::size_t i = 0; i < 4; ++i) {
    fv.names.push_back(prefix + std::string(kStatSuffix[i]));
    fv.values.push_back(v[i]);
  }
}

std::string lower(std::string_view band) {
  std::string s(band);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

FeatureVector extract_features(const GrayImage& img, const FeatureConfig& cfg) {
  const Matrix m = to_matrix(img);
  const WaveletDecomposition wd = dwt2d(m, make_filter(cfg.filter), cfg.levels);
  const Matrix spectrum_map = log_magnitude(fft2d(m));

  FeatureVector fv;
  push_moments(fv, "wll", wd.ll);
  push_moments(fv, "fft", spectrum_map);
  if (cfg.mode == FeatureMode::extended) {
    for (std::size_t i = 0; i < wd.levels(); ++i) {
      const std::string lvl = std::to_string(i + 1);
      push_moments(fv, "whl" + lvl, wd.details[i].hl);
      push_moments(fv, "wlh" + lvl, wd.details[i].lh);
      push_moments(fv, "whh" + lvl, wd.details[i].hh);
    }
    const DetailLevel& last = wd.details.back();
    const std::pair<Band, const Matrix*> finals[] = {
        {Band::LL, &wd.ll}, {Band::HL, &last.hl}, {Band::LH, &last.lh}, {Band::HH, &last.hh}};
    for (const auto& [band, map] : finals) {
      fv.names.push_back("xcorr_" + lower(to_string(band)));
      fv.values.push_back(cross_correlation(*map, spectrum_map));
    }
  }
  return fv;
}

std::vector<std::string> feature_names(const FeatureConfig& cfg) {
  // Names depend only on the configuration, so a minimal image suffices.
  const std::size_t side = std::size_t{1} << (cfg.levels + 2);
  GrayImage probe(side, side, 0.0);
  probe.pixels[0] = 1.0;
  return extract_features(probe, cfg).names;
}

std::size_t FeatureTable::count(Label l) const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [l](const FeatureRow& r) { return r.label == l; }));
}

std::size_t FeatureTable::column(std::string_view name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(Errc::FeatureMismatch, "no feature column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names.begin());
}

FeatureTable FeatureTable::select_rows(std::span<const std::size_t> idx) const {
  FeatureTable out{names, {}};
  out.rows.reserve(idx.size());
  for (std::size_t i : idx) out.rows.push_back(rows.at(i));
  return out;
}

FeatureTable FeatureTable::select_columns(std::span<const std::string> cols) const {
  std::vector<std::size_t> src;
  for (const auto& c : cols) src.push_back(column(c));
  FeatureTable out{{cols.begin(), cols.end()}, {}};
  out.rows.reserve(rows.size());
  for (const auto& r : rows) {
    FeatureRow nr{r.id, r.label, {}};
    for (std::size_t s : src) nr.values.push_back(r.values[s]);
    out.rows.push_back(std::move(nr));
  }
  return out;
}

std::string write_feature_csv(const FeatureTable& t) {
  std::string out = "id,label";
  for (const auto& n : t.names) out += "," + n;
  out += '\n';
  for (const auto& r : t.rows) {
    out += r.id;
    out += ',';
    out += to_string(r.label);
    for (double v : r.values) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

FeatureTable read_feature_csv(std::string_view text) {
  FeatureTable t;
  bool have_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    auto fail = [&](const std::string& why) {
      return Error(Errc::InvalidArgument, "feature CSV line " + std::to_string(line_no) + ": " + why);
    };
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "id" || fields[1] != "label") throw fail("header must start with id,label");
      for (std::size_t i = 2; i < fields.size(); ++i) {
        if (std::find(t.names.begin(), t.names.end(), fields[i]) != t.names.end()) {
          throw fail("duplicate feature '" + std::string(fields[i]) + "'");
        }
        t.names.emplace_back(fields[i]);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != t.names.size() + 2) {
      throw fail("expected " + std::to_string(t.names.size() + 2) + " fields, got " + std::to_string(fields.size()));
    }
    FeatureRow row{std::string(fields[0]), parse_label(fields[1]), {}};
    for (std::size_t i = 2; i < fields.size(); ++i) {
      auto v = parse_double(fields[i]);
      if (!v || !std::isfinite(*v)) throw fail("bad value '" + std::string(fields[i]) + "'");
      row.values.push_back(*v);
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(Errc::EmptyTable, "feature CSV has no header");
  return t;
}

std::vector<FeatureScore> rank_features(const FeatureTable& table) {
  if (table.count(Label::normal) < 2 || table.count(Label::suspicious) < 2) {
    throw Error(Errc::InsufficientData, "feature ranking needs at least two rows per class");
  }
  std::vector<FeatureScore> scores;
  for (std::size_t f = 0; f < table.names.size(); ++f) {
    double sum[2] = {0, 0}, n[2] = {0, 0};
    for (const auto& r : table.rows) {
      const int c = r.label == Label::suspicious;
      sum[c] += r.values[f];
      n[c] += 1.0;
    }
    const double mu[2] = {sum[0] / n[0], sum[1] / n[1]};
    double ss[2] = {0, 0};
    for (const auto& r : table.rows) {
      const int c = r.label == Label::suspicious;
      const double d = r.values[f] - mu[c];
      ss[c] += d * d;
    }
    const double gap = mu[1] - mu[0];
    scores.push_back({table.names[f], gap * gap / (ss[0] / n[0] + ss[1] / n[1] + 1e-12)});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const FeatureScore& a, const FeatureScore& b) { return a.fisher > b.fisher; });
  return scores;
}

std::vector<std::string> select_features(const FeatureTable& table, std::size_t k) {
  if (k < 1 || k > table.names.size()) {
    throw Error(Errc::BadK, "k=" + std::to_string(k) + " outside [1, " + std::to_string(table.names.size()) + "]");
  }
  auto ranked = rank_features(table);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].name);
  return out;
}

}  // namespace mammoscope
