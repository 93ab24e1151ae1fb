#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mammoscope/imgio.hpp"
#include "mammoscope/matrix.hpp"
#include "mammoscope/wavelet.hpp"

namespace mammoscope {

enum class Label { normal, suspicious };

std::string_view to_string(Label l) noexcept;
Label parse_label(std::string_view s);

// Moments over every entry of a map, population (divide-by-n) convention.
// Skewness and kurtosis are 0 when the standard deviation is <= 1e-12.
double mean(const Matrix& map);
double stddev(const Matrix& map);
double skewness(const Matrix& map);
/// Plain kurtosis mu4 / sigma^4 (a Gaussian scores 3).
double kurtosis(const Matrix& map);

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

Moments moments(const Matrix& map);

/// Bilinear resampling with pixel-centre alignment and edge clamping.
Matrix resample_bilinear(const Matrix& m, std::size_t rows, std::size_t cols);

/// Pearson correlation of `a` with `b` resampled onto a's grid; 0 if either map is degenerate.
double cross_correlation(const Matrix& a, const Matrix& b);

enum class FeatureMode { default8, extended };

std::string_view to_string(FeatureMode m) noexcept;
FeatureMode parse_feature_mode(std::string_view s);

struct FeatureConfig {
  FilterId filter = FilterId::daub4;
  std::size_t levels = 3;
  FeatureMode mode = FeatureMode::default8;
};

struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;

  double at(std::string_view name) const;
};

/// Feature names extract_features emits for `cfg`, in emission order.
std::vector<std::string> feature_names(const FeatureConfig& cfg);

/// Default mode: moments of the final-level LL subband (wll_*) then moments of the
/// centred log-magnitude spectrum (fft_*). Extended mode appends moments of every
/// detail subband (w<band><level>_*) and xcorr_<band> between each final-level
/// subband and the log-magnitude map.
FeatureVector extract_features(const GrayImage& img, const FeatureConfig& cfg = {});

struct FeatureRow {
  std::string id;
  Label label = Label::normal;
  std::vector<double> values;
};

struct FeatureTable {
  std::vector<std::string> names;
  std::vector<FeatureRow> rows;

  std::size_t count(Label l) const;
  std::size_t column(std::string_view name) const;
  /// Subset of rows by index, in the given order.
  FeatureTable select_rows(std::span<const std::size_t> idx) const;
  /// Projection onto `names`, in that order.
  FeatureTable select_columns(std::span<const std::string> cols) const;
};

/// CSV: header `id,label,<names...>`, shortest round-trip decimals.
std::string write_feature_csv(const FeatureTable& t);
FeatureTable read_feature_csv(std::string_view text);

struct FeatureScore {
  std::string name;
  double fisher = 0.0;
};

/// Fisher ratio (mu+ - mu-)^2 / (var+ + var- + 1e-12) per feature, descending,
/// stable with respect to header order.
std::vector<FeatureScore> rank_features(const FeatureTable& table);
std::vector<std::string> select_features(const FeatureTable& table, std::size_t k);

}  // namespace mammoscope
