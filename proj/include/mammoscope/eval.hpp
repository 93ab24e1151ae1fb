#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mammoscope/features.hpp"

namespace mammoscope {

/// Suspicious is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const Label> predicted, std::span<const Label> truth);

/// tp / (tp + fn).
double sensitivity(const ConfusionMatrix& cm);
/// tn / (tn + fp).
double specificity(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// One operating point per distinct score (suspicious iff score >= threshold),
/// preceded by a +inf sentinel at (0, 0). The last point is always (1, 1).
RocCurve roc(std::span<const double> scores, std::span<const Label> truth);

/// Trapezoidal area under the curve's points.
double auc(const RocCurve& curve);

std::string roc_csv(const RocCurve& curve);
std::string roc_svg(const RocCurve& curve);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified k-fold partition of the table's rows. Each class is shuffled with
/// Lcg64(seed) (normal rows first, then suspicious) and dealt round-robin, the
/// suspicious deal continuing from the fold where the normal deal stopped.
std::vector<Split> kfold(const FeatureTable& table, std::size_t k, std::uint64_t seed);
std::vector<Split> kfold(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

}  // namespace mammoscope
