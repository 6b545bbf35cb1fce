#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "igbot/account.hpp"
#include "igbot/evaluation.hpp"
#include "igbot/explain.hpp"
#include "igbot/features.hpp"
#include "igbot/model_spec.hpp"
#include "igbot/preprocessing.hpp"
#include "igbot/report.hpp"
#include "igbot/synthgen.hpp"

namespace igbot {

struct PipelineConfig {
  std::optional<std::string> dataset_path;  // JSONL input
  std::optional<SynthConfig> synth;         // or a generated benchmark
  std::vector<ModelSpec> models;            // evaluated in order; defaults to every kind
  ModelKind final_model = ModelKind::adaboost;
  double corr_threshold = kDefaultCorrThreshold;
  double importance_threshold = kDefaultImportanceThreshold;
  ExperimentOptions experiment;
  std::size_t cv_folds = 10;
  double test_fraction = 0.3;
  double ci_level = 0.95;
  std::size_t ci_sample_size = 50;  // per class, drawn from the test split
  std::size_t pdp_grid_size = kDefaultPdpGridSize;
  std::size_t top_n = 50;
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "igbot-out";

  static PipelineConfig defaults();
  void validate() const;  // throws ConfigError
  const ModelSpec& final_spec() const;
};

// Canonical form, excluding the output directory so that identical runs into
// different directories share a hash.
nlohmann::ordered_json to_json(const PipelineConfig& config);
// A synth block without "seed" inherits the master seed; when neither a
// dataset nor a synth block is given, the default benchmark is used.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);  // throws ConfigError
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

std::string config_hash(const PipelineConfig& config);
std::string display_name(ModelKind kind);

struct ModelEvaluation {
  ModelSpec spec;
  CvReport cv;
  double test_roc_auc = 0.0;
};

struct ConfidenceReport {
  ConfidenceInterval bots;
  ConfidenceInterval genuine;
  std::vector<double> bot_probabilities;      // full test split, per class
  std::vector<double> genuine_probabilities;
  bool disjoint = false;
};

struct ExplainReport {
  ImportanceReport importance;
  std::vector<PdpCurve> pdps;
};

struct ReportBundle {
  std::filesystem::path out_dir;
  std::vector<std::string> files;  // relative to out_dir, sorted
  std::string summary;
};

// Stages are computed lazily and cached, so each subcommand runs only the
// prefix it needs and every writer sees the same intermediate results.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  const PipelineConfig& config() const { return config_; }
  ReportHeader header() const;

  const Dataset& dataset();
  const FeatureMatrix& features();      // raw, every record
  const StandardizationParams& scaling();  // fit on labelled rows
  const FeatureMatrix& labelled();      // standardized labelled rows
  const FeatureSelection& selection();
  const FeatureMatrix& pruned();        // labelled rows, kept features
  const Split& split();                 // rows of pruned()
  const std::vector<ModelEvaluation>& classification();
  const ComparisonReport& comparison();
  const ConfidenceReport& confidence();
  const TrainedModel& final_model();    // all labelled rows, carries scaling
  const ExplainReport& explain();
  const std::vector<HoldoutIteration>& holdout();
  const std::vector<RankedAccount>& ranking();

  // Each writer emits its JSON report (if any) plus CSV tables and returns
  // the relative paths written.
  std::vector<std::string> write_dataset_file();
  std::vector<std::string> write_features();
  std::vector<std::string> write_selection();
  std::vector<std::string> write_classification();
  std::vector<std::string> write_comparison();
  std::vector<std::string> write_confidence();
  std::vector<std::string> write_model();
  std::vector<std::string> write_explain();
  std::vector<std::string> write_holdout();
  std::vector<std::string> write_ranking();
  std::vector<std::string> write_manifest(std::vector<std::string> files);

  std::string summary();

 private:
  std::string write(const std::string& relative, const std::string& contents);

  PipelineConfig config_;
  std::string hash_;
  std::optional<Dataset> dataset_;
  std::optional<FeatureMatrix> features_;
  std::optional<StandardizationParams> scaling_;
  std::optional<FeatureMatrix> labelled_;
  std::optional<FeatureSelection> selection_;
  std::optional<FeatureMatrix> pruned_;
  std::optional<Split> split_;
  std::optional<std::vector<ModelEvaluation>> classification_;
  std::optional<ComparisonReport> comparison_;
  std::optional<ConfidenceReport> confidence_;
  std::optional<TrainedModel> final_model_;
  std::optional<ExplainReport> explain_;
  std::optional<std::vector<HoldoutIteration>> holdout_;
  std::optional<std::vector<RankedAccount>> ranking_;
};

// gen/load, features, standardize, prune, classification, comparison,
// confidence, explain, holdout, ranking; then a manifest of every file.
ReportBundle run_pipeline(const PipelineConfig& config);

}  // namespace igbot
