#include "mammoscope/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mammoscope/error.hpp"
#include "mammoscope/numfmt.hpp"
#include "mammoscope/rng.hpp"

namespace mammoscope {

ConfusionMatrix confusion(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(predicted.size()) + " predictions for " +
                                          std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) throw Error(Errc::EmptyInput, "no cases to tally");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pos = predicted[i] == Label::suspicious;
    if (truth[i] == Label::suspicious) {
      (pos ? cm.tp : cm.fn) += 1;
    } else {
      (pos ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

double sensitivity(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0) throw Error(Errc::NoPositives, "sensitivity is undefined without positive cases");
  return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

double specificity(const ConfusionMatrix& cm) {
  if (cm.tn + cm.fp == 0) throw Error(Errc::NoNegatives, "specificity is undefined without negative cases");
  return static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
}

RocCurve roc(std::span<const double> scores, std::span<const Label> truth) {
  if (scores.size() != truth.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(scores.size()) + " scores for " + std::to_string(truth.size()) +
                                          " labels");
  }
  const auto positives = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), Label::suspicious));
  const std::size_t negatives = truth.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(Errc::DegenerateLabels, "ROC needs at least one case of each class");
  }
  for (double s : scores)
    if (std::isnan(s)) throw Error(Errc::InvalidArgument, "NaN score");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, HUGE_VAL});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double t = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == t; ++i) {
      (truth[order[i]] == Label::suspicious ? tp : fp) += 1;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives), t});
  }
  curve.auc = auc(curve);
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return area;
}

std::string roc_csv(const RocCurve& curve) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : curve.points) {
    out += format_double(p.threshold) + "," + format_double(p.fpr) + "," + format_double(p.tpr) + "\n";
  }
  return out;
}

std::string roc_svg(const RocCurve& curve) {
  constexpr double size = 400.0;
  constexpr double margin = 40.0;
  auto px = [&](double v) { return format_double(margin + v * size); };
  auto py = [&](double v) { return format_double(margin + (1.0 - v) * size); };
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n"
      "<rect x=\"40\" y=\"40\" width=\"400\" height=\"400\" fill=\"none\" stroke=\"black\"/>\n"
      "<line x1=\"40\" y1=\"440\" x2=\"440\" y2=\"40\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n"
      "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (i) out += ' ';
    out += px(curve.points[i].fpr) + "," + py(curve.points[i].tpr);
  }
  out += "\"/>\n";
  out += "<text x=\"240\" y=\"470\" text-anchor=\"middle\" font-size=\"14\">false positive rate</text>\n";
  out += "<text x=\"15\" y=\"240\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 15 240)\">"
         "true positive rate</text>\n";
  out += "<text x=\"430\" y=\"430\" text-anchor=\"end\" font-size=\"14\">AUC = " + format_double(curve.auc) +
         "</text>\n</svg>\n";
  return out;
}

std::vector<Split> kfold(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(Errc::BadK, "k-fold needs k >= 2");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] == Label::suspicious].push_back(i);
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < k) {
      throw Error(Errc::TooFewRows, "class " + std::string(to_string(static_cast<Label>(c))) + " has " +
                                        std::to_string(by_class[c].size()) + " rows, fewer than k=" +
                                        std::to_string(k));
    }
  }

  Lcg64 rng(seed);
  std::vector<std::size_t> fold_of(labels.size());
  std::size_t next_fold = 0;
  for (auto& rows : by_class) {
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);
    for (std::size_t r : rows) {
      fold_of[r] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }

  std::vector<Split> splits(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) (f == fold_of[i] ? splits[f].test : splits[f].train).push_back(i);
  }
  return splits;
}

std::vector<Split> kfold(const FeatureTable& table, std::size_t k, std::uint64_t seed) {
  std::vector<Label> labels;
  labels.reserve(table.rows.size());
  for (const auto& r : table.rows) labels.push_back(r.label);
  return kfold(labels, k, seed);
}

}  // namespace mammoscope
