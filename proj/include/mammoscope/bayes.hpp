#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "mammoscope/features.hpp"

namespace mammoscope {

/// Two-class Gaussian naive Bayes. Index 0 is `normal`, index 1 is `suspicious`.
struct GaussianNbModel {
  static constexpr int kFormatVersion = 1;

  std::array<double, 2> priors{0.5, 0.5};
  std::vector<std::string> feature_names;
  std::array<std::vector<double>, 2> means;
  std::array<std::vector<double>, 2> variances;
  double variance_floor = 1e-12;

  bool operator==(const GaussianNbModel&) const = default;
};

/// Priors are class frequencies; per-class means and population variances,
/// each variance floored at max(1e-9 * pooled feature variance, 1e-12).
GaussianNbModel train(const FeatureTable& table);

struct Posterior {
  double normal = 0.5;
  double suspicious = 0.5;
};

/// log P(suspicious|x) - log P(normal|x); every per-feature log density is floored at -745.
double log_odds(const GaussianNbModel& model, const FeatureVector& x);
double log_odds(const GaussianNbModel& model, std::span<const double> values);

/// Normalized posterior. The log-odds is clamped to +/- 52 ln 2 so neither class
/// probability rounds to exactly 0 or 1.
Posterior posterior(const GaussianNbModel& model, const FeatureVector& x);
Posterior posterior(const GaussianNbModel& model, std::span<const double> values);

struct Decision {
  Label label = Label::normal;
  double score = 0.0;  // P(suspicious | x)
};

/// suspicious iff P(suspicious|x) >= threshold; threshold must lie in (0, 1).
Decision classify(const GaussianNbModel& model, const FeatureVector& x, double threshold = 0.5);
Decision classify(const GaussianNbModel& model, std::span<const double> values, double threshold = 0.5);

/// Text format: `nbmodel v1`, `floor <v>`, `prior <class> <p>`,
/// `gauss <class> <feature> <mean> <variance>`, closed by an `end` line.
std::string save_model(const GaussianNbModel& model);
GaussianNbModel load_model(std::string_view text);

}  // namespace mammoscope
