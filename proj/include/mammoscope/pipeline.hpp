#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mammoscope/bayes.hpp"
#include "mammoscope/eval.hpp"
#include "mammoscope/features.hpp"
#include "mammoscope/phantom.hpp"
#include "mammoscope/preprocess.hpp"

namespace mammoscope {

/// Settings for every stage. Text form is flat `section.key = value` lines;
/// '#' starts a comment and unknown keys are rejected.
struct PipelineConfig {
  PreprocessConfig preprocess;
  FeatureConfig features;
  std::size_t select_k = 0;  // 0 keeps every feature
  double threshold = 0.5;
  std::size_t cv_folds = 5;
  std::uint64_t cv_seed = 1;
  PhantomConfig phantom;

  void validate() const;
};

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string format_config(const PipelineConfig& cfg);

struct ManifestEntry {
  std::filesystem::path path;  // resolved against the manifest's directory
  Label label = Label::normal;
  std::string id;              // file stem
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);

/// Preprocessing followed by feature extraction for one image.
FeatureVector process_image(const GrayImage& img, const PipelineConfig& cfg);

struct ExtractFailure {
  std::string id;
  std::string message;
};

struct ExtractResult {
  FeatureTable table;
  std::vector<ExtractFailure> failures;
};

/// Rows come out in manifest order whatever `jobs` is.
ExtractResult extract_manifest(const std::vector<ManifestEntry>& entries, const PipelineConfig& cfg,
                               std::size_t jobs = 1);

/// Applies select_k (Fisher ranking) when set, then trains.
GaussianNbModel train_model(const FeatureTable& table, const PipelineConfig& cfg);

/// Scores every row; columns are matched to the model's feature names.
std::vector<Decision> predict(const FeatureTable& table, const GaussianNbModel& model, double threshold);
std::string predictions_csv(const FeatureTable& table, const std::vector<Decision>& decisions);

struct EvaluationReport {
  std::size_t folds = 0;
  std::vector<double> scores;  // out-of-fold P(suspicious|x), table row order
  std::vector<Label> truth;
  ConfusionMatrix confusion;
  double sensitivity = 0.0;
  double specificity = 0.0;
  RocCurve roc;

  std::string summary(double threshold) const;
};

/// Stratified k-fold cross validation with out-of-fold scores pooled into one ROC.
EvaluationReport evaluate(const FeatureTable& table, const PipelineConfig& cfg, std::size_t jobs = 1);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace mammoscope
