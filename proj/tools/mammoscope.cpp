// mammoscope: batch front end for the phantom / extract / train / predict / evaluate pipeline.
//
// Exit status: 0 success, 1 partial data failure, 2 usage or configuration error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "mammoscope/error.hpp"
#include "mammoscope/pipeline.hpp"

namespace fs = std::filesystem;
using namespace mammoscope;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kUsage = 2;

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

std::string read_text(const fs::path& p) {
  auto b = read_file(p);
  return {b.begin(), b.end()};
}

PipelineConfig config_from(const std::string& path) { return path.empty() ? PipelineConfig{} : load_config(path); }

// The target directory must exist and be a directory; the file itself is written later.
void check_writable_parent(const fs::path& out) {
  const fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
  if (!fs::is_directory(parent)) throw Error(Errc::IoError, "output directory '" + parent.string() + "' does not exist");
}

int cmd_phantom(const std::string& config, const std::string& out_dir) {
  const PipelineConfig cfg = config_from(config);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw Error(Errc::IoError, "cannot create '" + out_dir + "'");
  const auto images = generate(cfg.phantom);
  const auto manifest = write_phantom_set(out_dir, images);
  std::cout << "wrote " << images.size() << " images and " << manifest.string() << "\n";
  return kOk;
}

int cmd_extract(const std::string& manifest, const std::string& config, const std::string& out, std::size_t jobs) {
  const PipelineConfig cfg = config_from(config);
  const auto entries = read_manifest(manifest);
  check_writable_parent(out);
  const ExtractResult res = extract_manifest(entries, cfg, jobs);
  for (const auto& f : res.failures) std::cerr << "extract: " << f.id << ": " << f.message << "\n";
  write_file(out, bytes_of(write_feature_csv(res.table)));
  std::cout << "extracted " << res.table.rows.size() << " of " << entries.size() << " images\n";
  return res.failures.empty() ? kOk : kPartial;
}

int cmd_train(const std::string& features, const std::string& config, const std::string& out) {
  const PipelineConfig cfg = config_from(config);
  const FeatureTable table = read_feature_csv(read_text(features));
  check_writable_parent(out);
  const GaussianNbModel model = train_model(table, cfg);
  write_file(out, bytes_of(save_model(model)));
  std::cout << "trained on " << table.rows.size() << " rows, " << model.feature_names.size() << " features\n";
  return kOk;
}

int cmd_predict(const std::string& features, const std::string& model_path, const std::string& config,
                const std::string& out) {
  const PipelineConfig cfg = config_from(config);
  const FeatureTable table = read_feature_csv(read_text(features));
  const GaussianNbModel model = load_model(read_text(model_path));
  check_writable_parent(out);
  const auto decisions = predict(table, model, cfg.threshold);
  write_file(out, bytes_of(predictions_csv(table, decisions)));
  return kOk;
}

int cmd_evaluate(const std::string& features, const std::string& config, const std::string& roc_path,
                 const std::string& svg_path, std::size_t jobs) {
  const PipelineConfig cfg = config_from(config);
  const FeatureTable table = read_feature_csv(read_text(features));
  if (!roc_path.empty()) check_writable_parent(roc_path);
  if (!svg_path.empty()) check_writable_parent(svg_path);
  const EvaluationReport rep = evaluate(table, cfg, jobs);
  std::cout << rep.summary(cfg.threshold);
  if (!roc_path.empty()) write_file(roc_path, bytes_of(roc_csv(rep.roc)));
  if (!svg_path.empty()) write_file(svg_path, bytes_of(roc_svg(rep.roc)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mammoscope: wavelet + Fourier moment features with a Gaussian naive Bayes classifier"};
  app.require_subcommand(1);

  std::string config;
  std::size_t jobs = 1;
  std::string out, manifest, features, model, roc_path, svg_path;

  auto* phantom = app.add_subcommand("phantom", "Generate a labelled synthetic image set");
  phantom->add_option("--config", config, "Pipeline config file (phantom.* keys)");
  phantom->add_option("--out", out, "Output directory")->required();

  auto* extract = app.add_subcommand("extract", "Preprocess images and write the feature table");
  extract->add_option("--manifest", manifest, "Manifest CSV (path,label)")->required();
  extract->add_option("--config", config, "Pipeline config file");
  extract->add_option("--out", out, "Feature CSV to write")->required();
  extract->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "Train a Gaussian naive Bayes model");
  train->add_option("--features", features, "Feature CSV")->required();
  train->add_option("--config", config, "Pipeline config file");
  train->add_option("--out", out, "Model file to write")->required();

  auto* predict = app.add_subcommand("predict", "Score a feature table with a trained model");
  predict->add_option("--features", features, "Feature CSV")->required();
  predict->add_option("--model", model, "Model file")->required();
  predict->add_option("--config", config, "Pipeline config file (classifier.threshold)");
  predict->add_option("--out", out, "Prediction CSV to write")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Stratified k-fold cross validation");
  evaluate->add_option("--features", features, "Feature CSV")->required();
  evaluate->add_option("--config", config, "Pipeline config file");
  evaluate->add_option("--roc", roc_path, "ROC CSV to write (threshold,fpr,tpr)");
  evaluate->add_option("--svg", svg_path, "ROC SVG plot to write");
  evaluate->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*phantom) return cmd_phantom(config, out);
    if (*extract) return cmd_extract(manifest, config, out, jobs);
    if (*train) return cmd_train(features, config, out);
    if (*predict) return cmd_predict(features, model, config, out);
    if (*evaluate) return cmd_evaluate(features, config, roc_path, svg_path, jobs);
  } catch (const std::exception& e) {
    std::cerr << "mammoscope: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
