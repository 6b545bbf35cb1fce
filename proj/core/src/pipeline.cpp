#include "igbot/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "igbot/error.hpp"
#include "igbot/format.hpp"
#include "igbot/random.hpp"
#include "igbot/version.hpp"

namespace igbot {

namespace {

// Stage tags for stage_seed; fixed forever so that outputs stay comparable.
enum StageTag : std::uint64_t {
  kTagPrune = 1,
  kTagCv = 2,
  kTagSplit = 3,
  kTagFit = 4,
  kTagCompare = 5,
  kTagConfidence = 6,
  kTagHoldout = 7,
  kTagFinal = 8,
};

constexpr std::array<ModelKind, 6> kAllKinds = {ModelKind::gnb,   ModelKind::knn,     ModelKind::dtree,
                                                ModelKind::svm,   ModelKind::rforest, ModelKind::adaboost};

template <class T>
T get_as(const nlohmann::json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::size_t get_size(const nlohmann::json& j, const char* key) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw ConfigError(std::string("config key '") + key + "' must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::vector<std::string> pruned_names(const FeatureSelection& s) { return s.kept; }

std::string f(double v) { return format_double(v); }

}  // namespace

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig c;
  c.synth = SynthConfig{};
  c.synth->seed = c.seed;
  for (auto k : kAllKinds) c.models.push_back(ModelSpec::defaults(k));
  return c;
}

void PipelineConfig::validate() const {
  if (dataset_path.has_value() == synth.has_value()) {
    throw ConfigError("config must set exactly one data source: 'dataset' or 'synth'");
  }
  if (synth) synth->validate();
  if (models.empty()) throw ConfigError("config must list at least one model");
  std::set<ModelKind> kinds;
  for (const auto& m : models) {
    m.validate();
    if (!kinds.insert(m.kind()).second) {
      throw ConfigError("model kind '" + std::string(to_string(m.kind())) + "' listed twice");
    }
  }
  if (final_model != ModelKind::dtree && final_model != ModelKind::rforest && final_model != ModelKind::adaboost) {
    throw ConfigError("final_model must support importances: dtree, rforest or adaboost");
  }
  if (!kinds.count(final_model)) throw ConfigError("final_model must be one of the listed models");
  if (!(corr_threshold > 0.0)) throw ConfigError("corr_threshold must be > 0");
  if (!(importance_threshold >= 0.0 && importance_threshold <= 1.0)) {
    throw ConfigError("importance_threshold must lie in [0, 1]");
  }
  if (experiment.repetitions < 2) throw ConfigError("experiment.repetitions must be >= 2");
  if (experiment.shuffles_per_rep < 1) throw ConfigError("experiment.shuffles_per_rep must be >= 1");
  if (experiment.k < 2) throw ConfigError("experiment.k must be >= 2");
  if (experiment.test_sample_size < 30) throw ConfigError("experiment.test_sample_size must be >= 30");
  if (cv_folds < 2) throw ConfigError("cv_folds must be >= 2");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("test_fraction must lie in (0, 1)");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw ConfigError("ci_level must lie in (0, 1)");
  if (ci_sample_size < 30) throw ConfigError("ci_sample_size must be >= 30");
  if (pdp_grid_size < 2) throw ConfigError("pdp_grid_size must be >= 2");
}

const ModelSpec& PipelineConfig::final_spec() const {
  for (const auto& m : models) {
    if (m.kind() == final_model) return m;
  }
  throw ConfigError("final_model must be one of the listed models");
}

nlohmann::ordered_json to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  if (c.dataset_path) j["dataset"] = *c.dataset_path;
  if (c.synth) j["synth"] = to_json(*c.synth);
  auto& models = j["models"] = nlohmann::ordered_json::array();
  for (const auto& m : c.models) models.push_back(to_json(m));
  j["final_model"] = std::string(to_string(c.final_model));
  j["corr_threshold"] = c.corr_threshold;
  j["importance_threshold"] = c.importance_threshold;
  j["experiment"] = {{"repetitions", c.experiment.repetitions},
                     {"shuffles_per_rep", c.experiment.shuffles_per_rep},
                     {"k", c.experiment.k},
                     {"test_sample_size", c.experiment.test_sample_size}};
  j["cv_folds"] = c.cv_folds;
  j["test_fraction"] = c.test_fraction;
  j["ci_level"] = c.ci_level;
  j["ci_sample_size"] = c.ci_sample_size;
  j["pdp_grid_size"] = c.pdp_grid_size;
  j["top_n"] = c.top_n;
  return j;
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("pipeline config must be a JSON object");
  PipelineConfig c = PipelineConfig::defaults();
  c.synth.reset();
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config key 'seed' must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const auto& v = *it;
    if (k == "seed") {
      continue;
    } else if (k == "dataset") {
      c.dataset_path = get_as<std::string>(v, "dataset");
    } else if (k == "synth") {
      nlohmann::json s = v;
      if (s.is_object() && !s.contains("seed")) s["seed"] = c.seed;
      c.synth = synth_config_from_json(s);
    } else if (k == "models") {
      if (!v.is_array()) throw ConfigError("config key 'models' must be an array");
      c.models.clear();
      for (const auto& m : v) c.models.push_back(model_spec_from_json(m));
    } else if (k == "final_model") {
      c.final_model = parse_model_kind(get_as<std::string>(v, "final_model"));
    } else if (k == "corr_threshold") {
      c.corr_threshold = get_as<double>(v, "corr_threshold");
    } else if (k == "importance_threshold") {
      c.importance_threshold = get_as<double>(v, "importance_threshold");
    } else if (k == "experiment") {
      if (!v.is_object()) throw ConfigError("config key 'experiment' must be an object");
      for (auto e = v.begin(); e != v.end(); ++e) {
        if (e.key() == "repetitions") c.experiment.repetitions = get_size(*e, "experiment.repetitions");
        else if (e.key() == "shuffles_per_rep") c.experiment.shuffles_per_rep = get_size(*e, "experiment.shuffles_per_rep");
        else if (e.key() == "k") c.experiment.k = get_size(*e, "experiment.k");
        else if (e.key() == "test_sample_size") c.experiment.test_sample_size = get_size(*e, "experiment.test_sample_size");
        else throw ConfigError("unknown config key 'experiment." + e.key() + "'");
      }
    } else if (k == "cv_folds") {
      c.cv_folds = get_size(v, "cv_folds");
    } else if (k == "test_fraction") {
      c.test_fraction = get_as<double>(v, "test_fraction");
    } else if (k == "ci_level") {
      c.ci_level = get_as<double>(v, "ci_level");
    } else if (k == "ci_sample_size") {
      c.ci_sample_size = get_size(v, "ci_sample_size");
    } else if (k == "pdp_grid_size") {
      c.pdp_grid_size = get_size(v, "pdp_grid_size");
    } else if (k == "top_n") {
      c.top_n = get_size(v, "top_n");
    } else if (k == "out_dir") {
      c.out_dir = get_as<std::string>(v, "out_dir");
    } else {
      throw ConfigError("unknown config key '" + k + "'");
    }
  }
  if (!c.dataset_path && !c.synth) {
    c.synth = SynthConfig{};
    c.synth->seed = c.seed;
  }
  c.validate();
  return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return pipeline_config_from_json(j);
}

std::string config_hash(const PipelineConfig& config) { return hex64(fnv1a64(to_json(config).dump())); }

std::string display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::gnb: return "Naive Bayes";
    case ModelKind::knn: return "KNN";
    case ModelKind::dtree: return "Decision Tree";
    case ModelKind::svm: return "SVM";
    case ModelKind::rforest: return "Random Forest";
    case ModelKind::adaboost: return "AdaBoost";
  }
  return "unknown";
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
  config_.validate();
  hash_ = config_hash(config_);
}

ReportHeader Pipeline::header() const { return {kVersion, hash_, config_.seed}; }

const Dataset& Pipeline::dataset() {
  if (!dataset_) {
    dataset_ = config_.synth ? generate_dataset(*config_.synth) : load_dataset(*config_.dataset_path);
    if (dataset_->records.empty()) throw DataError("dataset has no records");
  }
  return *dataset_;
}

const FeatureMatrix& Pipeline::features() {
  if (!features_) features_ = build_feature_matrix(dataset());
  return *features_;
}

const StandardizationParams& Pipeline::scaling() {
  if (!scaling_) {
    const FeatureMatrix lab = features().labelled();
    std::size_t bots = 0;
    for (int v : lab.y) bots += v == kBot;
    if (bots == 0 || bots == lab.rows()) throw DataError("dataset needs labelled bots and genuine accounts");
    if (lab.rows() < std::max(config_.cv_folds, config_.experiment.k)) {
      throw DataError("too few labelled accounts for the configured folds");
    }
    auto st = z_standardize(lab.x);
    scaling_ = std::move(st.params);
    labelled_ = FeatureMatrix{lab.names, lab.ids, std::move(st.x), lab.y};
  }
  return *scaling_;
}

const FeatureMatrix& Pipeline::labelled() {
  scaling();
  return *labelled_;
}

const FeatureSelection& Pipeline::selection() {
  if (!selection_) {
    selection_ = prune_features(labelled(), config_.corr_threshold, config_.importance_threshold,
                                stage_seed(config_.seed, kTagPrune));
    if (selection_->kept.empty()) throw DataError("feature pruning removed every feature");
  }
  return *selection_;
}

const FeatureMatrix& Pipeline::pruned() {
  if (!pruned_) pruned_ = labelled().select_features(selection().kept);
  return *pruned_;
}

const Split& Pipeline::split() {
  if (!split_) {
    split_ = train_test_split(pruned().rows(), config_.test_fraction, stage_seed(config_.seed, kTagSplit));
    std::size_t test_bots = 0;
    for (auto i : split_->test) test_bots += pruned().y[i] == kBot;
    if (test_bots == 0 || test_bots == split_->test.size()) {
      throw DataError("test split lacks one of the classes; use more data or a larger test_fraction");
    }
  }
  return *split_;
}

const std::vector<ModelEvaluation>& Pipeline::classification() {
  if (!classification_) {
    const auto& fm = pruned();
    const auto train = fm.select_rows(split().train);
    const auto test = fm.select_rows(split().test);
    std::vector<ModelEvaluation> out;
    for (const auto& spec : config_.models) {
      ModelEvaluation e{spec, kfold_cv(spec, fm.x, fm.y, config_.cv_folds, stage_seed(config_.seed, kTagCv)), 0.0};
      const auto model = fit(spec, train.x, train.y, stage_seed(config_.seed, kTagFit), fm.names);
      const auto proba = predict_proba(model, test.x);
      std::vector<double> p_bot(proba.size());
      for (std::size_t i = 0; i < proba.size(); ++i) p_bot[i] = proba[i][1];
      e.test_roc_auc = roc_auc(test.y, p_bot);
      e.cv.mean.roc_auc = e.test_roc_auc;
      out.push_back(std::move(e));
    }
    classification_ = std::move(out);
  }
  return *classification_;
}

const ComparisonReport& Pipeline::comparison() {
  if (!comparison_) {
    const auto& all = labelled();
    const auto basic = all.select_features(basic_feature_names());
    comparison_ = repeated_experiment(basic.x, all.x, all.y, config_.experiment, stage_seed(config_.seed, kTagCompare));
  }
  return *comparison_;
}

const ConfidenceReport& Pipeline::confidence() {
  if (!confidence_) {
    const auto& fm = pruned();
    const auto train = fm.select_rows(split().train);
    const auto test = fm.select_rows(split().test);
    const auto model = fit(config_.final_spec(), train.x, train.y, stage_seed(config_.seed, kTagFit), fm.names);
    const auto proba = predict_proba(model, test.x);
    ConfidenceReport r;
    for (std::size_t i = 0; i < proba.size(); ++i) {
      (test.y[i] == kBot ? r.bot_probabilities : r.genuine_probabilities).push_back(proba[i][1]);
    }
    Rng rng(stage_seed(config_.seed, kTagConfidence));
    auto draw = [&](const std::vector<double>& pool) {
      if (pool.size() < 30) throw DataError("confidence intervals need at least 30 test accounts per class");
      const auto n = std::min(config_.ci_sample_size, pool.size());
      const auto perm = shuffled_indices(pool.size(), rng);
      std::vector<double> sample(n);
      for (std::size_t i = 0; i < n; ++i) sample[i] = pool[perm[i]];
      return confidence_interval(sample, config_.ci_level);
    };
    r.bots = draw(r.bot_probabilities);
    r.genuine = draw(r.genuine_probabilities);
    r.disjoint = r.bots.center - r.bots.half_width > r.genuine.center + r.genuine.half_width ||
                 r.genuine.center - r.genuine.half_width > r.bots.center + r.bots.half_width;
    confidence_ = std::move(r);
  }
  return *confidence_;
}

const TrainedModel& Pipeline::final_model() {
  if (!final_model_) {
    const auto& fm = pruned();
    std::vector<std::size_t> cols;
    for (const auto& name : fm.names) cols.push_back(labelled().column_index(name));
    final_model_ = fit(config_.final_spec(), fm.x, fm.y, stage_seed(config_.seed, kTagFinal), fm.names)
                       .with_scaling(scaling().select(cols));
  }
  return *final_model_;
}

const ExplainReport& Pipeline::explain() {
  if (!explain_) {
    ExplainReport r;
    r.importance = importance_report(final_model());
    for (const auto& name : pruned().names) {
      r.pdps.push_back(partial_dependence(final_model(), pruned().x, name, config_.pdp_grid_size));
    }
    explain_ = std::move(r);
  }
  return *explain_;
}

const std::vector<HoldoutIteration>& Pipeline::holdout() {
  if (!holdout_) {
    const auto names = pruned_names(selection());
    holdout_ = provider_holdout(dataset(), config_.final_spec(), names, stage_seed(config_.seed, kTagHoldout));
  }
  return *holdout_;
}

const std::vector<RankedAccount>& Pipeline::ranking() {
  if (!ranking_) {
    Dataset pool;
    for (const auto& r : dataset().records) {
      if (r.label == Label::unknown) pool.records.push_back(r);
    }
    ranking_ = rank_by_bot_probability(final_model(), pool.records.empty() ? dataset() : pool, config_.top_n);
  }
  return *ranking_;
}

std::string Pipeline::write(const std::string& relative, const std::string& contents) {
  write_text_file(config_.out_dir / relative, contents);
  return relative;
}

std::vector<std::string> Pipeline::write_dataset_file() {
  std::ostringstream out;
  write_dataset(dataset(), out);
  return {write("dataset.jsonl", out.str())};
}

std::vector<std::string> Pipeline::write_features() {
  std::ostringstream out;
  out << render_csv_header(header(), "features");
  write_feature_csv(features(), out);
  return {write("tables/features.csv", out.str())};
}

std::vector<std::string> Pipeline::write_selection() {
  const auto& s = selection();
  nlohmann::ordered_json data = to_json(s);
  data["scaling"] = to_json(scaling());
  data["feature_names"] = labelled().names;

  CsvTable t{{"feature", "status", "importance", "correlated_with", "r"}, {}};
  for (std::size_t i = 0; i < labelled().names.size(); ++i) {
    const auto& name = labelled().names[i];
    std::vector<std::string> row{name, "kept", f(s.reference_importance[i]), "", ""};
    for (const auto& d : s.dropped_unimportant) {
      if (d.name == name) row[1] = "dropped_unimportant";
    }
    for (const auto& d : s.dropped_correlated) {
      if (d.dropped == name) {
        row[1] = "dropped_correlated";
        row[3] = d.kept_partner;
        row[4] = f(d.r);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return {write("selection.json", render_json(wrap_report(header(), "selection", std::move(data)))),
          write("tables/selection.csv", render_csv(header(), "selection", t))};
}

std::vector<std::string> Pipeline::write_classification() {
  const auto& evals = classification();
  std::vector<SummaryRow> rows;
  for (const auto& e : evals) rows.push_back({display_name(e.spec.kind()), e.cv.mean});
  const auto best = column_maxima(rows);
  static const std::array<const char*, 5> kCols = {"accuracy", "precision", "recall", "f1", "roc_auc"};

  nlohmann::ordered_json data;
  data["cv_folds"] = config_.cv_folds;
  data["test_fraction"] = config_.test_fraction;
  data["features"] = pruned().names;
  auto& models = data["models"] = nlohmann::ordered_json::array();
  CsvTable t{{"model", "accuracy", "precision", "recall", "f1", "roc_auc", "best"}, {}};
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const auto& e = evals[i];
    nlohmann::ordered_json m;
    m["model"] = rows[i].model;
    m["spec"] = to_json(e.spec);
    m["mean"] = to_json(e.cv.mean);
    auto& folds = m["folds"] = nlohmann::ordered_json::array();
    for (const auto& fold : e.cv.folds) folds.push_back(to_json(fold));
    std::string best_cols;
    auto& flags = m["best"] = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < kCols.size(); ++c) {
      if (!best[i][c]) continue;
      flags.push_back(kCols[c]);
      if (!best_cols.empty()) best_cols += ';';
      best_cols += kCols[c];
    }
    models.push_back(std::move(m));
    t.rows.push_back({rows[i].model, f(e.cv.mean.accuracy), f(e.cv.mean.precision), f(e.cv.mean.recall),
                      f(e.cv.mean.f1), f(e.test_roc_auc), best_cols});
  }
  return {write("classification.json", render_json(wrap_report(header(), "classification", std::move(data)))),
          write("tables/classification.csv", render_csv(header(), "classification", t))};
}

std::vector<std::string> Pipeline::write_comparison() {
  const auto& r = comparison();
  nlohmann::ordered_json data = to_json(r);
  data["options"] = to_json(config_)["experiment"];

  CsvTable t{{"measure", "basic_mean", "basic_band", "all_mean", "all_band", "p_value", "basic", "all"}, {}};
  for (const auto& row : r.rows) {
    t.rows.push_back({row.metric, f(row.basic_mean), f(row.basic_band), f(row.all_mean), f(row.all_band),
                      f(row.p_value), format_fixed(row.basic_mean, 2) + " +/- " + format_fixed(row.basic_band, 2),
                      format_fixed(row.all_mean, 2) + " +/- " + format_fixed(row.all_band, 2)});
  }
  CsvTable samples{{"repetition", "arm", "accuracy", "precision", "recall", "f1"}, {}};
  for (std::size_t arm = 0; arm < 2; ++arm) {
    for (std::size_t rep = 0; rep < r.samples[arm][0].size(); ++rep) {
      std::vector<std::string> row{std::to_string(rep), arm == 0 ? "basic" : "all"};
      for (std::size_t m = 0; m < 4; ++m) row.push_back(f(r.samples[arm][m][rep]));
      samples.rows.push_back(std::move(row));
    }
  }
  return {write("comparison.json", render_json(wrap_report(header(), "comparison", std::move(data)))),
          write("tables/comparison.csv", render_csv(header(), "comparison", t)),
          write("tables/comparison_samples.csv", render_csv(header(), "comparison_samples", samples))};
}

std::vector<std::string> Pipeline::write_confidence() {
  const auto& r = confidence();
  auto ci_json = [](const ConfidenceInterval& ci) {
    return nlohmann::ordered_json{{"center", ci.center}, {"half_width", ci.half_width}, {"n", ci.n},
                                  {"interval", format_interval(ci)}};
  };
  nlohmann::ordered_json data;
  data["model"] = display_name(config_.final_model);
  data["level"] = config_.ci_level;
  data["bots"] = ci_json(r.bots);
  data["genuine"] = ci_json(r.genuine);
  data["disjoint"] = r.disjoint;
  data["test_probabilities"] = {{"bots", r.bot_probabilities}, {"genuine", r.genuine_probabilities}};

  CsvTable t{{"class", "center", "half_width", "n", "interval"}, {}};
  t.rows.push_back({"Bots", f(r.bots.center), f(r.bots.half_width), std::to_string(r.bots.n), format_interval(r.bots)});
  t.rows.push_back({"Genuine Accounts", f(r.genuine.center), f(r.genuine.half_width), std::to_string(r.genuine.n),
                    format_interval(r.genuine)});
  CsvTable probs{{"class", "p_bot"}, {}};
  for (double p : r.bot_probabilities) probs.rows.push_back({"bot", f(p)});
  for (double p : r.genuine_probabilities) probs.rows.push_back({"genuine", f(p)});
  return {write("confidence.json", render_json(wrap_report(header(), "confidence", std::move(data)))),
          write("tables/confidence.csv", render_csv(header(), "confidence", t)),
          write("tables/test_probabilities.csv", render_csv(header(), "test_probabilities", probs))};
}

std::vector<std::string> Pipeline::write_model() {
  return {write("model.json", render_json(wrap_report(header(), "model", to_json(final_model()))))};
}

std::vector<std::string> Pipeline::write_explain() {
  const auto& r = explain();
  nlohmann::ordered_json data;
  data["model"] = display_name(config_.final_model);
  data["importance"] = to_json(r.importance);
  auto& pdps = data["pdp"] = nlohmann::ordered_json::array();
  for (const auto& c : r.pdps) pdps.push_back(to_json(c));

  std::vector<std::string> files{write("explain.json", render_json(wrap_report(header(), "explain", std::move(data))))};
  CsvTable imp{{"rank", "feature", "importance"}, {}};
  for (std::size_t i = 0; i < r.importance.ranking.size(); ++i) {
    imp.rows.push_back({std::to_string(i + 1), r.importance.ranking[i].first, f(r.importance.ranking[i].second)});
  }
  files.push_back(write("tables/importance.csv", render_csv(header(), "importance", imp)));
  for (const auto& c : r.pdps) {
    CsvTable t{{"grid", "grid_raw", "mean_p_bot"}, {}};
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      t.rows.push_back({f(c.grid[i]), c.grid_raw.empty() ? "" : f(c.grid_raw[i]), f(c.mean_p_bot[i])});
    }
    files.push_back(write("tables/pdp_" + c.feature + ".csv", render_csv(header(), "pdp_" + c.feature, t)));
  }
  return files;
}

std::vector<std::string> Pipeline::write_holdout() {
  const auto& its = holdout();
  const auto cv = kfold_cv(config_.final_spec(), pruned().x, pruned().y, config_.cv_folds,
                           stage_seed(config_.seed, kTagCv));
  nlohmann::ordered_json data;
  data["model"] = display_name(config_.final_model);
  data["pooled_cv"] = to_json(cv.mean);
  auto& arr = data["iterations"] = nlohmann::ordered_json::array();
  CsvTable t{{"measure"}, {}};
  for (const auto& it : its) {
    t.columns.push_back(it.provider);
    arr.push_back({{"provider", it.provider},
                   {"metrics", to_json(it.metrics)},
                   {"genuine_resampled", it.genuine_resampled},
                   {"train_size", it.train_ids.size()},
                   {"test_ids", it.test_ids}});
  }
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    std::vector<std::string> row{kMetricNames[m]};
    for (const auto& it : its) row.push_back(f(metric_value(it.metrics, m)));
    t.rows.push_back(std::move(row));
  }
  return {write("holdout.json", render_json(wrap_report(header(), "holdout", std::move(data)))),
          write("tables/holdout.csv", render_csv(header(), "holdout", t))};
}

std::vector<std::string> Pipeline::write_ranking() {
  const auto& ranked = ranking();
  nlohmann::ordered_json data;
  data["model"] = display_name(config_.final_model);
  data["top_n"] = config_.top_n;
  auto& arr = data["accounts"] = nlohmann::ordered_json::array();
  CsvTable t{{"rank", "id", "p_bot"}, {}};
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    arr.push_back({{"id", ranked[i].id}, {"p_bot", ranked[i].p_bot}});
    t.rows.push_back({std::to_string(i + 1), ranked[i].id, f(ranked[i].p_bot)});
  }
  return {write("ranking.json", render_json(wrap_report(header(), "ranking", std::move(data)))),
          write("tables/ranking.csv", render_csv(header(), "ranking", t))};
}

std::vector<std::string> Pipeline::write_manifest(std::vector<std::string> files) {
  std::sort(files.begin(), files.end());
  nlohmann::ordered_json data;
  data["config"] = to_json(config_);
  auto& arr = data["files"] = nlohmann::ordered_json::array();
  for (const auto& rel : files) {
    std::ifstream in(config_.out_dir / rel, std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    arr.push_back({{"path", rel}, {"bytes", bytes.size()}, {"fnv1a64", hex64(fnv1a64(bytes))}});
  }
  return {write("manifest.json", render_json(wrap_report(header(), "manifest", std::move(data))))};
}

std::string Pipeline::summary() {
  std::vector<SummaryRow> rows;
  for (const auto& e : classification()) rows.push_back({display_name(e.spec.kind()), e.cv.mean});
  return format_summary_table(rows);
}

ReportBundle run_pipeline(const PipelineConfig& config) {
  Pipeline p(config);
  std::vector<std::string> files;
  auto add = [&files](std::vector<std::string> more) { files.insert(files.end(), more.begin(), more.end()); };
  add(p.write_features());
  add(p.write_selection());
  add(p.write_classification());
  add(p.write_comparison());
  add(p.write_confidence());
  add(p.write_explain());
  add(p.write_holdout());
  add(p.write_ranking());
  add(p.write_manifest(files));
  std::sort(files.begin(), files.end());
  return {config.out_dir, std::move(files), p.summary()};
}

}  // namespace igbot
