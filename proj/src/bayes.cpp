#include "mammoscope/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mammoscope/error.hpp"
#include "mammoscope/numfmt.hpp"

namespace mammoscope {
namespace {

constexpr double kLogDensityFloor = -745.0;
// 52 ln 2: 1 / (1 + 2^-52) still rounds below 1.0.
const double kMaxLogOdds = 52.0 * std::numbers::ln2;

double log_gauss(double x, double mu, double var) {
  const double d = x - mu;
  const double v = -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
  return std::max(v, kLogDensityFloor);
}

void check_features(const GaussianNbModel& model, const FeatureVector& x) {
  if (x.names != model.feature_names) {
    throw Error(Errc::FeatureMismatch, "feature vector names do not match the model's " +
                                           std::to_string(model.feature_names.size()) + " features");
  }
}

}  // namespace

GaussianNbModel train(const FeatureTable& table) {
  if (table.rows.empty()) throw Error(Errc::EmptyTable, "no training rows");
  const std::size_t counts[2] = {table.count(Label::normal), table.count(Label::suspicious)};
  if (counts[0] == 0 || counts[1] == 0) {
    throw Error(Errc::MissingClass, std::string("no rows labelled ") + (counts[0] == 0 ? "normal" : "suspicious"));
  }
  const std::size_t nf = table.names.size();
  for (const auto& r : table.rows) {
    if (r.values.size() != nf) throw Error(Errc::FeatureMismatch, "row '" + r.id + "' has the wrong width");
  }

  GaussianNbModel m;
  m.feature_names = table.names;
  const double total = static_cast<double>(table.rows.size());
  for (int c = 0; c < 2; ++c) {
    m.priors[c] = static_cast<double>(counts[c]) / total;
    m.means[c].assign(nf, 0.0);
    m.variances[c].assign(nf, 0.0);
  }
  for (const auto& r : table.rows) {
    const int c = r.label == Label::suspicious;
    for (std::size_t f = 0; f < nf; ++f) m.means[c][f] += r.values[f];
  }
  for (int c = 0; c < 2; ++c)
    for (double& mu : m.means[c]) mu /= static_cast<double>(counts[c]);
  for (const auto& r : table.rows) {
    const int c = r.label == Label::suspicious;
    for (std::size_t f = 0; f < nf; ++f) {
      const double d = r.values[f] - m.means[c][f];
      m.variances[c][f] += d * d;
    }
  }
  for (std::size_t f = 0; f < nf; ++f) {
    double gmean = 0.0;
    for (const auto& r : table.rows) gmean += r.values[f];
    gmean /= total;
    double gvar = 0.0;
    for (const auto& r : table.rows) gvar += (r.values[f] - gmean) * (r.values[f] - gmean);
    gvar /= total;
    const double floor = std::max(1e-9 * gvar, m.variance_floor);
    for (int c = 0; c < 2; ++c) {
      double& v = m.variances[c][f];
      v = std::max(v / static_cast<double>(counts[c]), floor);
    }
  }
  return m;
}

double log_odds(const GaussianNbModel& model, std::span<const double> values) {
  if (values.size() != model.feature_names.size()) {
    throw Error(Errc::FeatureMismatch, "expected " + std::to_string(model.feature_names.size()) + " features, got " +
                                           std::to_string(values.size()));
  }
  double lp[2];
  for (int c = 0; c < 2; ++c) {
    lp[c] = std::log(model.priors[c]);
    for (std::size_t f = 0; f < values.size(); ++f) lp[c] += log_gauss(values[f], model.means[c][f], model.variances[c][f]);
  }
  return lp[1] - lp[0];
}

double log_odds(const GaussianNbModel& model, const FeatureVector& x) {
  check_features(model, x);
  return log_odds(model, std::span<const double>(x.values));
}

Posterior posterior(const GaussianNbModel& model, std::span<const double> values) {
  const double z = std::clamp(log_odds(model, values), -kMaxLogOdds, kMaxLogOdds);
  // Normalization of the two joint densities; each side computed directly to keep both tails accurate.
  Posterior p;
  if (z >= 0) {
    const double e = std::exp(-z);
    p.suspicious = 1.0 / (1.0 + e);
    p.normal = e / (1.0 + e);
  } else {
    const double e = std::exp(z);
    p.suspicious = e / (1.0 + e);
    p.normal = 1.0 / (1.0 + e);
  }
  return p;
}

Posterior posterior(const GaussianNbModel& model, const FeatureVector& x) {
  check_features(model, x);
  return posterior(model, std::span<const double>(x.values));
}

Decision classify(const GaussianNbModel& model, std::span<const double> values, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(Errc::InvalidArgument, "threshold must lie in (0, 1), got " + format_double(threshold));
  }
  const Posterior p = posterior(model, values);
  return {p.suspicious >= threshold ? Label::suspicious : Label::normal, p.suspicious};
}

Decision classify(const GaussianNbModel& model, const FeatureVector& x, double threshold) {
  check_features(model, x);
  return classify(model, std::span<const double>(x.values), threshold);
}

std::string save_model(const GaussianNbModel& model) {
  std::string out = "nbmodel v" + std::to_string(GaussianNbModel::kFormatVersion) + "\n";
  out += "floor " + format_double(model.variance_floor) + "\n";
  for (int c = 0; c < 2; ++c) {
    out += "prior " + std::string(to_string(static_cast<Label>(c))) + " " + format_double(model.priors[c]) + "\n";
  }
  for (int c = 0; c < 2; ++c) {
    const std::string cls(to_string(static_cast<Label>(c)));
    for (std::size_t f = 0; f < model.feature_names.size(); ++f) {
      out += "gauss " + cls + " " + model.feature_names[f] + " " + format_double(model.means[c][f]) + " " +
             format_double(model.variances[c][f]) + "\n";
    }
  }
  out += "end\n";
  return out;
}

GaussianNbModel load_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto corrupt = [](const std::string& why) { return Error(Errc::CorruptModel, why); };

  if (!std::getline(in, line)) throw corrupt("empty model file");
  {
    std::istringstream head(line);
    std::string magic, version;
    head >> magic >> version;
    if (magic != "nbmodel" || version.size() < 2 || version[0] != 'v') throw corrupt("missing 'nbmodel v<N>' header");
    if (version != "v" + std::to_string(GaussianNbModel::kFormatVersion)) {
      throw Error(Errc::UnknownVersion, "model format " + version + " is not supported");
    }
  }

  GaussianNbModel m;
  bool have_floor = false;
  bool have_end = false;
  bool have_prior[2] = {false, false};
  std::vector<std::string> names[2];
  auto number = [&](const std::string& tok) {
    auto v = parse_double(tok);
    if (!v || !std::isfinite(*v)) throw corrupt("bad number '" + tok + "'");
    return *v;
  };
  auto class_index = [&](const std::string& tok) {
    if (tok == "normal") return 0;
    if (tok == "suspicious") return 1;
    throw corrupt("unknown class '" + tok + "'");
  };

  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    if (have_end) throw corrupt("data after end record");
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (kind == "floor" && toks.size() == 1) {
      m.variance_floor = number(toks[0]);
      have_floor = true;
    } else if (kind == "end" && toks.empty()) {
      have_end = true;
    } else if (kind == "prior" && toks.size() == 2) {
      const int c = class_index(toks[0]);
      m.priors[c] = number(toks[1]);
      have_prior[c] = true;
    } else if (kind == "gauss" && toks.size() == 4) {
      const int c = class_index(toks[0]);
      names[c].push_back(toks[1]);
      m.means[c].push_back(number(toks[2]));
      m.variances[c].push_back(number(toks[3]));
    } else {
      throw corrupt("unrecognized record '" + line + "'");
    }
  }

  if (!have_end) throw corrupt("missing end record (truncated file?)");
  if (!have_floor || !have_prior[0] || !have_prior[1]) throw corrupt("missing floor or prior records");
  if (names[0].empty() || names[0] != names[1]) throw corrupt("per-class feature lists are empty or differ");
  if (!(m.variance_floor > 0.0)) throw corrupt("variance floor must be positive");
  if (!(m.priors[0] > 0.0 && m.priors[1] > 0.0) || std::abs(m.priors[0] + m.priors[1] - 1.0) > 1e-12) {
    throw corrupt("priors must be positive and sum to 1");
  }
  for (int c = 0; c < 2; ++c)
    for (double v : m.variances[c])
      if (v < m.variance_floor) throw corrupt("variance below floor");
  m.feature_names = std::move(names[0]);
  return m;
}

}  // namespace mammoscope
