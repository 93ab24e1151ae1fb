#include "mammoscope/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "mammoscope/error.hpp"
#include "mammoscope/numfmt.hpp"

namespace mammoscope {

namespace {

Error config_error(std::size_t line, const std::string& why) {
  return Error(Errc::ConfigError, line ? "line " + std::to_string(line) + ": " + why : why);
}

bool parse_bool(std::string_view v, std::size_t line) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw config_error(line, "expected on/off, got '" + std::string(v) + "'");
}

std::uint64_t parse_uint(std::string_view v, std::size_t line) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw config_error(line, "expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

double parse_real(std::string_view v, std::size_t line) {
  auto d = parse_double(v);
  if (!d || !std::isfinite(*d)) throw config_error(line, "expected a number, got '" + std::string(v) + "'");
  return *d;
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(preprocess.threshold >= 0.0 && preprocess.threshold <= 1.0)) {
    throw config_error(0, "preprocess.threshold must lie in [0, 1]");
  }
  if (features.levels < 1) throw config_error(0, "wavelet.levels must be at least 1");
  if (!(threshold > 0.0 && threshold < 1.0)) throw config_error(0, "classifier.threshold must lie in (0, 1)");
  if (cv_folds < 2) throw config_error(0, "cv.folds must be at least 2");
  phantom.validate();
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  using Setter = void (*)(PipelineConfig&, std::string_view, std::size_t);
  static const std::map<std::string, Setter, std::less<>> setters = {
      {"preprocess.threshold", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.preprocess.threshold = parse_real(v, l); }},
      {"preprocess.orient", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.preprocess.orient = parse_bool(v, l); }},
      {"preprocess.artifact_removal", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.preprocess.artifact_removal = parse_bool(v, l); }},
      {"wavelet.filter", [](PipelineConfig& c, std::string_view v, std::size_t l) {
         try {
           c.features.filter = parse_filter_id(v);
         } catch (const Error& e) {
           throw config_error(l, e.what());
         }
       }},
      {"wavelet.levels", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.features.levels = parse_uint(v, l); }},
      {"features.mode", [](PipelineConfig& c, std::string_view v, std::size_t l) {
         try {
           c.features.mode = parse_feature_mode(v);
         } catch (const Error& e) {
           throw config_error(l, e.what());
         }
       }},
      {"features.select_k", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.select_k = parse_uint(v, l); }},
      {"classifier.threshold", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.threshold = parse_real(v, l); }},
      {"cv.folds", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.cv_folds = parse_uint(v, l); }},
      {"cv.seed", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.cv_seed = parse_uint(v, l); }},
      {"phantom.size", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.phantom.size = parse_uint(v, l); }},
      {"phantom.count_per_class", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.phantom.count_per_class = parse_uint(v, l); }},
      {"phantom.seed", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.phantom.seed = parse_uint(v, l); }},
      {"phantom.noise_sigma", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.phantom.noise_sigma = parse_real(v, l); }},
      {"phantom.mass_amplitude", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.phantom.mass_amplitude = parse_real(v, l); }},
      {"phantom.mass_radius", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.phantom.mass_radius = parse_real(v, l); }},
      {"phantom.microcalc_count", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.phantom.microcalc_count = parse_uint(v, l); }},
      {"phantom.microcalc_amplitude", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.phantom.microcalc_amplitude = parse_real(v, l); }},
      {"phantom.artifact_label", [](PipelineConfig& c, std::string_view v, std::size_t l) { c.phantom.artifact_label = parse_bool(v, l); }},
  };

  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw config_error(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) throw config_error(line_no, "unknown key '" + std::string(key) + "'");
    it->second(cfg, value, line_no);
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file(path);
  } catch (const Error& e) {
    throw Error(Errc::ConfigError, "cannot read config '" + path.string() + "'");
  }
  return parse_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string format_config(const PipelineConfig& c) {
  auto onoff = [](bool b) { return b ? "on" : "off"; };
  std::string s;
  s += "preprocess.threshold = " + format_double(c.preprocess.threshold) + "\n";
  s += "preprocess.orient = " + std::string(onoff(c.preprocess.orient)) + "\n";
  s += "preprocess.artifact_removal = " + std::string(onoff(c.preprocess.artifact_removal)) + "\n";
  s += "wavelet.filter = " + std::string(to_string(c.features.filter)) + "\n";
  s += "wavelet.levels = " + std::to_string(c.features.levels) + "\n";
  s += "features.mode = " + std::string(to_string(c.features.mode)) + "\n";
  s += "features.select_k = " + std::to_string(c.select_k) + "\n";
  s += "classifier.threshold = " + format_double(c.threshold) + "\n";
  s += "cv.folds = " + std::to_string(c.cv_folds) + "\n";
  s += "cv.seed = " + std::to_string(c.cv_seed) + "\n";
  s += "phantom.size = " + std::to_string(c.phantom.size) + "\n";
  s += "phantom.count_per_class = " + std::to_string(c.phantom.count_per_class) + "\n";
  s += "phantom.seed = " + std::to_string(c.phantom.seed) + "\n";
  s += "phantom.noise_sigma = " + format_double(c.phantom.noise_sigma) + "\n";
  s += "phantom.mass_amplitude = " + format_double(c.phantom.mass_amplitude) + "\n";
  s += "phantom.mass_radius = " + format_double(c.phantom.mass_radius) + "\n";
  s += "phantom.microcalc_count = " + std::to_string(c.phantom.microcalc_count) + "\n";
  s += "phantom.microcalc_amplitude = " + format_double(c.phantom.microcalc_amplitude) + "\n";
  s += "phantom.artifact_label = " + std::string(onoff(c.phantom.artifact_label)) + "\n";
  return s;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
  std::vector<std::uint8_t> bytes = read_file(manifest);
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  const auto base = manifest.parent_path();
  std::vector<ManifestEntry> out;
  bool header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string_view::npos) {
      throw Error(Errc::InvalidArgument, "manifest line " + std::to_string(line_no) + ": expected 'path,label'");
    }
    const auto path = trim(line.substr(0, comma));
    const auto label = trim(line.substr(comma + 1));
    if (!header) {
      if (path != "path" || label != "label") {
        throw Error(Errc::InvalidArgument, "manifest header must be 'path,label'");
      }
      header = true;
      continue;
    }
    std::filesystem::path p(std::string{path});
    if (p.is_relative()) p = base / p;
    out.push_back({p, parse_label(label), std::filesystem::path(std::string{path}).stem().string()});
  }
  if (!header) throw Error(Errc::InvalidArgument, "manifest is empty");
  return out;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

FeatureVector process_image(const GrayImage& img, const PipelineConfig& cfg) {
  return extract_features(preprocess_pipeline(img, cfg.preprocess), cfg.features);
}

ExtractResult extract_manifest(const std::vector<ManifestEntry>& entries, const PipelineConfig& cfg,
                               std::size_t jobs) {
  struct Slot {
    bool ok = false;
    FeatureVector fv;
    std::string error;
  };
  std::vector<Slot> slots(entries.size());
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    try {
      slots[i].fv = process_image(to_gray(read_pgm_file(entries[i].path)), cfg);
      slots[i].ok = true;
    } catch (const std::exception& e) {
      slots[i].error = e.what();
    }
  });

  ExtractResult result;
  result.table.names = feature_names(cfg.features);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (slots[i].ok) {
      result.table.rows.push_back({entries[i].id, entries[i].label, std::move(slots[i].fv.values)});
    } else {
      result.failures.push_back({entries[i].id, slots[i].error});
    }
  }
  return result;
}

GaussianNbModel train_model(const FeatureTable& table, const PipelineConfig& cfg) {
  if (cfg.select_k == 0) return train(table);
  const auto chosen = select_features(table, cfg.select_k);
  return train(table.select_columns(chosen));
}

std::vector<Decision> predict(const FeatureTable& table, const GaussianNbModel& model, double threshold) {
  const FeatureTable projected = table.select_columns(model.feature_names);
  std::vector<Decision> out;
  out.reserve(projected.rows.size());
  for (const auto& r : projected.rows) out.push_back(classify(model, std::span<const double>(r.values), threshold));
  return out;
}

std::string predictions_csv(const FeatureTable& table, const std::vector<Decision>& decisions) {
  std::string out = "id,score,label\n";
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    out += table.rows[i].id + "," + format_double(decisions[i].score) + "," +
           std::string(to_string(decisions[i].label)) + "\n";
  }
  return out;
}

EvaluationReport evaluate(const FeatureTable& table, const PipelineConfig& cfg, std::size_t jobs) {
  const auto splits = kfold(table, cfg.cv_folds, cfg.cv_seed);
  EvaluationReport rep;
  rep.folds = splits.size();
  rep.scores.assign(table.rows.size(), 0.0);
  for (const auto& r : table.rows) rep.truth.push_back(r.label);

  parallel_for(splits.size(), jobs, [&](std::size_t f) {
    const auto model = train_model(table.select_rows(splits[f].train), cfg);
    const auto test = table.select_rows(splits[f].test);
    const auto decisions = predict(test, model, cfg.threshold);
    // Test folds are disjoint, so each slot is written by exactly one worker.
    for (std::size_t i = 0; i < decisions.size(); ++i) rep.scores[splits[f].test[i]] = decisions[i].score;
  });

  std::vector<Label> predicted;
  predicted.reserve(rep.scores.size());
  for (double s : rep.scores) predicted.push_back(s >= cfg.threshold ? Label::suspicious : Label::normal);
  rep.confusion = confusion(predicted, rep.truth);
  rep.sensitivity = mammoscope::sensitivity(rep.confusion);
  rep.specificity = mammoscope::specificity(rep.confusion);
  rep.roc = roc(rep.scores, rep.truth);
  return rep;
}

std::string EvaluationReport::summary(double threshold) const {
  std::string s;
  s += "folds " + std::to_string(folds) + "\n";
  s += "threshold " + format_double(threshold) + "\n";
  s += "tp " + std::to_string(confusion.tp) + "\n";
  s += "fp " + std::to_string(confusion.fp) + "\n";
  s += "tn " + std::to_string(confusion.tn) + "\n";
  s += "fn " + std::to_string(confusion.fn) + "\n";
  s += "sensitivity " + format_double(sensitivity) + "\n";
  s += "specificity " + format_double(specificity) + "\n";
  s += "auc " + format_double(roc.auc) + "\n";
  return s;
}

}  // namespace mammoscope
