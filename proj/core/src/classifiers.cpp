#include "igbot/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "igbot/error.hpp"
#include "igbot/random.hpp"

namespace igbot {

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

GaussianNB GaussianNB::fit(const GnbParams& params, const Matrix& x, std::span<const int> y) {
  const std::size_t n = x.rows(), d = x.cols();
  GaussianNB m;
  double max_var = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0, var = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += x(r, c);
    mean /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) var += (x(r, c) - mean) * (x(r, c) - mean);
    max_var = std::max(max_var, var / static_cast<double>(n));
  }
  // Smoothing keeps zero-variance features from producing infinite densities.
  const double epsilon = std::max(params.var_smoothing * max_var, 1e-12);

  for (int cls : {kGenuine, kBot}) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < n; ++r) {
      if (y[r] == cls) rows.push_back(r);
    }
    m.priors_[cls] = static_cast<double>(rows.size()) / static_cast<double>(n);
    if (rows.empty()) continue;
    auto& mu = m.means_[cls];
    auto& var = m.vars_[cls];
    mu.assign(d, 0.0);
    var.assign(d, 0.0);
    for (auto r : rows) {
      for (std::size_t c = 0; c < d; ++c) mu[c] += x(r, c);
    }
    for (auto& v : mu) v /= static_cast<double>(rows.size());
    for (auto r : rows) {
      for (std::size_t c = 0; c < d; ++c) var[c] += (x(r, c) - mu[c]) * (x(r, c) - mu[c]);
    }
    for (auto& v : var) v = v / static_cast<double>(rows.size()) + epsilon;
  }
  return m;
}

double GaussianNB::prob_bot(std::span<const double> row) const {
  if (priors_[kBot] == 0.0) return 0.0;
  if (priors_[kGenuine] == 0.0) return 1.0;
  std::array<double, 2> log_joint{};
  for (int cls : {kGenuine, kBot}) {
    double lj = std::log(priors_[cls]);
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double var = vars_[cls][c];
      const double diff = row[c] - means_[cls][c];
      lj -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + diff * diff / var);
    }
    log_joint[cls] = lj;
  }
  const double hi = std::max(log_joint[0], log_joint[1]);
  const double e0 = std::exp(log_joint[0] - hi);
  const double e1 = std::exp(log_joint[1] - hi);
  return e1 / (e0 + e1);
}

nlohmann::ordered_json GaussianNB::to_json() const {
  return {{"priors", priors_},
          {"means", {means_[0], means_[1]}},
          {"variances", {vars_[0], vars_[1]}}};
}

GaussianNB GaussianNB::from_json(const nlohmann::json& j) {
  GaussianNB m;
  m.priors_ = j.at("priors").get<std::array<double, 2>>();
  for (int c = 0; c < 2; ++c) {
    m.means_[c] = j.at("means").at(c).get<std::vector<double>>();
    m.vars_[c] = j.at("variances").at(c).get<std::vector<double>>();
  }
  return m;
}

// ---------------------------------------------------------------------------
// k nearest neighbours

KnnClassifier KnnClassifier::fit(const KnnParams& params, const Matrix& x, std::span<const int> y) {
  KnnClassifier m;
  m.params_ = params;
  m.tree_ = BallTree(x, static_cast<std::size_t>(params.leaf_size), params.distance);
  m.labels_.assign(y.begin(), y.end());
  return m;
}

std::vector<Neighbor> KnnClassifier::neighbors(std::span<const double> row) const {
  const auto k = static_cast<std::size_t>(params_.k);
  if (params_.algorithm == KnnAlgorithm::brute) {
    return brute_force_neighbors(tree_.points(), row, k, params_.distance);
  }
  return tree_.query(row, k);
}

double KnnClassifier::prob_bot(std::span<const double> row) const {
  const auto nn = neighbors(row);
  double bot = 0.0, total = 0.0;
  if (params_.weights == KnnWeights::distance) {
    // Exact matches dominate: vote only among zero-distance neighbours.
    for (const auto& n : nn) {
      if (n.distance == 0.0) {
        total += 1.0;
        if (labels_[n.index] == kBot) bot += 1.0;
      }
    }
    if (total > 0.0) return bot / total;
    for (const auto& n : nn) {
      const double w = 1.0 / n.distance;
      total += w;
      if (labels_[n.index] == kBot) bot += w;
    }
  } else {
    for (const auto& n : nn) {
      total += 1.0;
      if (labels_[n.index] == kBot) bot += 1.0;
    }
  }
  return total > 0.0 ? bot / total : 0.5;
}

nlohmann::ordered_json KnnClassifier::to_json() const {
  return {{"n_features", tree_.points().cols()},
          {"points", tree_.points().data()},
          {"labels", labels_}};
}

KnnClassifier KnnClassifier::from_json(const KnnParams& params, const nlohmann::json& j) {
  const auto d = j.at("n_features").get<std::size_t>();
  const auto flat = j.at("points").get<std::vector<double>>();
  const auto labels = j.at("labels").get<Labels>();
  if (d == 0 || flat.size() != d * labels.size()) throw std::invalid_argument("knn: bad points");
  Matrix x(labels.size(), d);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(i * d),
              flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * d), x.row(i).begin());
  }
  return fit(params, x, labels);
}

// ---------------------------------------------------------------------------
// Trees and forests

TreeOptions tree_options(const DtreeParams& p) {
  TreeOptions o;
  o.criterion = p.criterion;
  o.splitter = p.splitter;
  o.max_depth = p.max_depth;
  o.min_samples_split = p.min_samples_split;
  o.min_samples_leaf = p.min_samples_leaf;
  o.min_impurity_split = p.min_impurity_split;
  return o;
}

TreeOptions tree_options(const ForestParams& p, std::size_t n_features) {
  TreeOptions o;
  o.criterion = p.criterion;
  o.splitter = Splitter::best;
  o.max_depth = p.max_depth;
  o.min_samples_split = p.min_samples_split;
  o.min_samples_leaf = p.min_samples_leaf;
  if (p.max_features) {
    o.max_features = std::min<std::size_t>(static_cast<std::size_t>(*p.max_features), n_features);
  }
  return o;
}

RandomForest RandomForest::fit(const ForestParams& params, const Matrix& x, std::span<const int> y,
                               std::uint64_t seed) {
  RandomForest f;
  const auto opts = tree_options(params, x.cols());
  const std::size_t n = x.rows();
  for (int t = 0; t < params.n_estimators; ++t) {
    Rng rng(unit_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<double> weights;
    if (params.bootstrap) {
      weights.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) weights[uniform_index(n, rng)] += 1.0;
    }
    f.trees_.push_back(DecisionTree::fit(x, y, weights, opts, rng));
  }
  return f;
}

double RandomForest::prob_bot(std::span<const double> row) const {
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.prob_bot(row);
  return sum / static_cast<double>(trees_.size());
}

std::vector<double> RandomForest::importance() const {
  std::vector<double> imp(trees_.front().n_features(), 0.0);
  for (const auto& t : trees_) {
    const auto ti = t.importance();
    for (std::size_t f = 0; f < imp.size(); ++f) imp[f] += ti[f];
  }
  double sum = 0.0;
  for (double v : imp) sum += v;
  if (sum > 0.0) {
    for (double& v : imp) v /= sum;
  }
  return imp;
}

nlohmann::ordered_json RandomForest::to_json() const {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& t : trees_) arr.push_back(t.to_json());
  return {{"trees", arr}};
}

RandomForest RandomForest::from_json(const nlohmann::json& j) {
  RandomForest f;
  for (const auto& t : j.at("trees")) f.trees_.push_back(DecisionTree::from_json(t));
  if (f.trees_.empty()) throw std::invalid_argument("forest has no trees");
  return f;
}

// ---------------------------------------------------------------------------
// TrainedModel

TrainedModel::TrainedModel(ModelSpec spec, std::vector<std::string> feature_names,
                           std::shared_ptr<const ModelState> state,
                           std::optional<StandardizationParams> scaling)
    : spec_(std::move(spec)),
      feature_names_(std::move(feature_names)),
      state_(std::move(state)),
      scaling_(std::move(scaling)) {}

TrainedModel TrainedModel::with_scaling(StandardizationParams scaling) const {
  if (scaling.means.size() != feature_names_.size()) {
    throw std::invalid_argument("scaling does not match the model's feature count");
  }
  return TrainedModel(spec_, feature_names_, state_, std::move(scaling));
}

double TrainedModel::prob_bot(std::span<const double> row) const {
  return std::visit([row](const auto& m) { return m.prob_bot(row); }, *state_);
}

TrainedModel fit(const ModelSpec& spec, const Matrix& x, std::span<const int> y, std::uint64_t seed,
                 std::vector<std::string> feature_names) {
  spec.validate();
  if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("fit: empty feature matrix");
  if (y.size() != x.rows()) throw std::invalid_argument("fit: label count does not match rows");
  bool has_bot = false, has_genuine = false;
  for (int v : y) {
    if (v == kBot) has_bot = true;
    else if (v == kGenuine) has_genuine = true;
    else throw std::invalid_argument("fit: labels must be 0 (genuine) or 1 (bot)");
  }
  const bool single_class_ok = spec.kind() == ModelKind::gnb || spec.kind() == ModelKind::knn;
  if (!(has_bot && has_genuine) && !single_class_ok) {
    throw std::invalid_argument("fit: both classes must be present");
  }
  if (feature_names.empty()) {
    for (std::size_t c = 0; c < x.cols(); ++c) feature_names.push_back("f" + std::to_string(c));
  }
  if (feature_names.size() != x.cols()) throw std::invalid_argument("fit: feature name count mismatch");

  auto state = std::visit(
      [&](const auto& p) -> ModelState {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GnbParams>) {
          return GaussianNB::fit(p, x, y);
        } else if constexpr (std::is_same_v<T, KnnParams>) {
          return KnnClassifier::fit(p, x, y);
        } else if constexpr (std::is_same_v<T, DtreeParams>) {
          Rng rng(seed);
          return DecisionTree::fit(x, y, {}, tree_options(p), rng);
        } else if constexpr (std::is_same_v<T, SvmParams>) {
          return SvmClassifier::fit(p, x, y, seed);
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          return RandomForest::fit(p, x, y, seed);
        } else {
          return AdaBoostSamme::fit(p, x, y, seed);
        }
      },
      spec.params);
  return TrainedModel(spec, std::move(feature_names),
                      std::make_shared<const ModelState>(std::move(state)));
}

std::vector<std::array<double, 2>> predict_proba(const TrainedModel& model, const Matrix& x) {
  if (x.cols() != model.feature_names().size()) {
    throw std::invalid_argument("predict: expected " + std::to_string(model.feature_names().size()) +
                                " features, got " + std::to_string(x.cols()));
  }
  std::vector<std::array<double, 2>> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double p = std::clamp(model.prob_bot(x.row(r)), 0.0, 1.0);
    out[r] = {1.0 - p, p};
  }
  return out;
}

Labels predict(const TrainedModel& model, const Matrix& x) {
  const auto proba = predict_proba(model, x);
  Labels out(proba.size());
  for (std::size_t r = 0; r < proba.size(); ++r) {
    out[r] = proba[r][1] > proba[r][0] ? kBot : kGenuine;
  }
  return out;
}

std::vector<double> gini_importance(const TrainedModel& model) {
  return std::visit(
      [](const auto& m) -> std::vector<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DecisionTree> || std::is_same_v<T, RandomForest> ||
                      std::is_same_v<T, AdaBoostSamme>) {
          return m.importance();
        } else {
          throw std::invalid_argument("gini_importance: model kind has no impurity-based splits");
        }
      },
      model.state());
}

}  // namespace igbot
