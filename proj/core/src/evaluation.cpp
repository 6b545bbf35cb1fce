#include "igbot/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "igbot/error.hpp"
#include "igbot/features.hpp"
#include "igbot/format.hpp"
#include "igbot/preprocessing.hpp"
#include "igbot/random.hpp"
#include "igbot/stats.hpp"

namespace igbot {

double metric_value(const Metrics& m, std::size_t index) {
  switch (index) {
    case 0:
      return m.accuracy;
    case 1:
      return m.precision;
    case 2:
      return m.recall;
    case 3:
      return m.f1;
  }
  throw std::out_of_range("metric index");
}

ConfusionCounts confusion_counts(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("confusion_metrics: length mismatch");
  if (y_true.empty()) throw std::invalid_argument("confusion_metrics: empty input");
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool actual = y_true[i] == kBot;
    const bool predicted = y_pred[i] == kBot;
    if (actual && predicted) ++c.tp;
    else if (!actual && predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Metrics metrics_from_counts(const ConfusionCounts& c) {
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn), tn = static_cast<double>(c.tn);
  Metrics m;
  m.accuracy = ratio(tp + tn, tp + fp + fn + tn);
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
  return m;
}

Metrics confusion_metrics(std::span<const int> y_true, std::span<const int> y_pred) {
  return metrics_from_counts(confusion_counts(y_true, y_pred));
}

double roc_auc(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) throw std::invalid_argument("roc_auc: length mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mid-ranks over tie groups give each tied pos/neg pair a weight of 1/2.
  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (y_true[order[t]] == kBot) {
        pos_rank_sum += mid_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("roc_auc: both classes required");
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("kfold: k must be >= 2");
  if (k > n) throw std::invalid_argument("kfold: k must not exceed the number of rows");
  Rng rng(seed);
  const auto perm = shuffled_indices(n, rng);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

namespace {

Metrics mean_metrics(std::span<const Metrics> ms) {
  Metrics out;
  for (const auto& m : ms) {
    out.accuracy += m.accuracy;
    out.precision += m.precision;
    out.recall += m.recall;
    out.f1 += m.f1;
  }
  const double n = static_cast<double>(ms.size());
  out.accuracy /= n;
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  return out;
}

}  // namespace

CvReport kfold_cv(const ModelSpec& spec, const Matrix& x, std::span<const int> y, std::size_t k,
                  std::uint64_t seed) {
  if (y.size() != x.rows()) throw std::invalid_argument("kfold_cv: label count mismatch");
  const auto folds = kfold_indices(x.rows(), k, seed);
  const Labels labels(y.begin(), y.end());
  CvReport report;
  report.fold_of_row.assign(x.rows(), 0);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train;
    train.reserve(x.rows() - folds[f].size());
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    }
    for (auto r : folds[f]) report.fold_of_row[r] = f;
    const auto model = fit(spec, x.select_rows(train), select(labels, train), unit_seed(seed, f));
    const auto pred = predict(model, x.select_rows(folds[f]));
    report.folds.push_back(confusion_metrics(select(labels, folds[f]), pred));
  }
  report.mean = mean_metrics(report.folds);
  return report;
}

double one_tailed_z_test(std::span<const double> a, std::span<const double> b, std::size_t min_size) {
  if (a.size() < min_size || b.size() < min_size) {
    throw std::invalid_argument("one_tailed_z_test: each sample needs at least " +
                                std::to_string(min_size) + " observations");
  }
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("one_tailed_z_test: samples too small");
  const double diff = mean(b) - mean(a);
  const double se = std::sqrt(sample_variance(a) / static_cast<double>(a.size()) +
                              sample_variance(b) / static_cast<double>(b.size()));
  if (se == 0.0) return diff > 0.0 ? 0.0 : diff < 0.0 ? 1.0 : 0.5;
  return normal_upper_tail(diff / se);
}

ConfidenceInterval confidence_interval(std::span<const double> sample, double level,
                                       VarianceConvention convention, std::size_t min_size) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence_interval: level must lie in (0, 1)");
  if (sample.size() < std::max<std::size_t>(min_size, 1)) {
    throw std::invalid_argument("confidence_interval: sample needs at least " +
                                std::to_string(min_size) + " observations");
  }
  const double var = convention == VarianceConvention::sample ? sample_variance(sample)
                                                              : population_variance(sample);
  const double z = normal_quantile(0.5 * (1.0 + level));
  return {mean(sample), z * std::sqrt(var) / std::sqrt(static_cast<double>(sample.size())),
          sample.size()};
}

std::string format_interval(const ConfidenceInterval& ci, int center_decimals, int width_decimals) {
  return format_fixed(ci.center, center_decimals) + " +/- " + format_fixed(ci.half_width, width_decimals);
}

ComparisonReport repeated_experiment(const Matrix& x_basic, const Matrix& x_all,
                                     std::span<const int> y, const ExperimentOptions& opt,
                                     std::uint64_t seed) {
  if (opt.repetitions < 2) throw ConfigError("repeated_experiment: repetitions must be >= 2");
  if (opt.shuffles_per_rep < 1) throw ConfigError("repeated_experiment: shuffles_per_rep must be >= 1");
  if (opt.test_sample_size < 2) throw ConfigError("repeated_experiment: test sample size must be >= 2");
  if (x_basic.rows() != y.size() || x_all.rows() != y.size()) {
    throw std::invalid_argument("repeated_experiment: arms must be row-aligned with labels");
  }
  const ModelSpec baseline = ModelSpec::defaults(ModelKind::gnb);
  const Labels labels(y.begin(), y.end());
  ComparisonReport report;
  for (auto& arm : report.samples) {
    for (auto& m : arm) m.reserve(opt.repetitions);
  }

  for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
    const std::uint64_t rep_seed = unit_seed(seed, rep);
    Rng rng(rep_seed);
    auto order = iota_indices(y.size());
    for (std::size_t s = 0; s < opt.shuffles_per_rep; ++s) std::shuffle(order.begin(), order.end(), rng);
    const Labels ys = select(labels, order);
    const std::array<const Matrix*, 2> arms = {&x_basic, &x_all};
    for (std::size_t a = 0; a < 2; ++a) {
      const auto cv = kfold_cv(baseline, arms[a]->select_rows(order), ys, opt.k, rep_seed);
      for (std::size_t m = 0; m < 4; ++m) report.samples[a][m].push_back(metric_value(cv.mean, m));
    }
  }

  // The z test runs on a random draw of repetitions, identical for both arms.
  Rng draw(stage_seed(seed, 0x7e57));
  if (opt.repetitions >= opt.test_sample_size) {
    auto idx = shuffled_indices(opt.repetitions, draw);
    idx.resize(opt.test_sample_size);
    report.test_sample = idx;
  } else {
    for (std::size_t i = 0; i < opt.test_sample_size; ++i) {
      report.test_sample.push_back(uniform_index(opt.repetitions, draw));
    }
  }

  for (std::size_t m = 0; m < 4; ++m) {
    const auto& basic = report.samples[0][m];
    const auto& all = report.samples[1][m];
    MetricComparison row;
    row.metric = kMetricNames[m];
    row.basic_mean = mean(basic);
    row.basic_band = 2.0 * std::sqrt(sample_variance(basic));
    row.all_mean = mean(all);
    row.all_band = 2.0 * std::sqrt(sample_variance(all));
    const auto a = select(basic, report.test_sample);
    const auto b = select(all, report.test_sample);
    row.p_value = one_tailed_z_test(a, b, std::min<std::size_t>(30, opt.test_sample_size));
    report.rows.push_back(row);
  }
  return report;
}

GridSearchResult grid_search(std::span<const ModelSpec> grid, const Matrix& x, std::span<const int> y,
                             std::size_t k, std::uint64_t seed) {
  if (grid.empty()) throw ConfigError("grid_search: empty grid");
  for (const auto& s : grid) {
    if (s.kind() != grid.front().kind()) throw ConfigError("grid_search: mixed model kinds in grid");
  }
  GridSearchResult result{grid.front(), 0, {}};
  double best_f1 = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.reports.push_back(kfold_cv(grid[i], x, y, k, seed));
    if (result.reports.back().mean.f1 > best_f1) {
      best_f1 = result.reports.back().mean.f1;
      result.best = grid[i];
      result.best_index = i;
    }
  }
  return result;
}

std::vector<HoldoutIteration> provider_holdout(const Dataset& dataset, const ModelSpec& spec,
                                               std::span<const std::string> feature_names,
                                               std::uint64_t seed) {
  const FeatureMatrix all = build_feature_matrix(dataset);
  const std::vector<std::string> names =
      feature_names.empty() ? all_feature_names()
                            : std::vector<std::string>(feature_names.begin(), feature_names.end());
  const FeatureMatrix fm = all.select_features(names);

  std::map<std::string, std::vector<std::size_t>> by_provider;
  std::vector<std::size_t> genuine;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& r = dataset.records[i];
    if (r.label == Label::bot && !r.provider.empty()) by_provider[r.provider].push_back(i);
    if (r.label == Label::genuine) genuine.push_back(i);
  }
  if (by_provider.size() < 2) throw DataError("provider_holdout: need at least two bot providers");
  if (genuine.empty()) throw DataError("provider_holdout: no genuine accounts");

  std::vector<HoldoutIteration> out;
  std::uint64_t iteration = 0;
  for (const auto& [provider, bots] : by_provider) {
    Rng rng(unit_seed(seed, iteration));
    HoldoutIteration it;
    it.provider = provider;

    std::vector<std::size_t> test_genuine;
    if (genuine.size() >= bots.size()) {
      auto perm = shuffled_indices(genuine.size(), rng);
      for (std::size_t i = 0; i < bots.size(); ++i) test_genuine.push_back(genuine[perm[i]]);
    } else {
      it.genuine_resampled = true;
      for (std::size_t i = 0; i < bots.size(); ++i) test_genuine.push_back(genuine[uniform_index(genuine.size(), rng)]);
    }
    std::vector<std::size_t> test = bots;
    test.insert(test.end(), test_genuine.begin(), test_genuine.end());

    std::vector<bool> in_test(dataset.records.size(), false);
    for (auto i : test) in_test[i] = true;
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
      if (!in_test[i] && fm.y[i] != kUnlabelled) train.push_back(i);
    }

    const auto train_fm = fm.select_rows(train);
    const auto test_fm = fm.select_rows(test);
    auto [x_train, scaling] = z_standardize(train_fm.x);
    const auto model = fit(spec, x_train, train_fm.y, unit_seed(seed, iteration), names);
    const auto pred = predict(model, scaling.apply(test_fm.x));
    it.metrics = confusion_metrics(test_fm.y, pred);
    it.train_ids = train_fm.ids;
    it.test_ids = test_fm.ids;
    out.push_back(std::move(it));
    ++iteration;
  }
  return out;
}

std::vector<double> score_accounts(const TrainedModel& model, const Dataset& dataset) {
  const FeatureMatrix fm = build_feature_matrix(dataset).select_features(model.feature_names());
  const Matrix x = model.scaling() ? model.scaling()->apply(fm.x) : fm.x;
  std::vector<double> p(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) p[r] = std::clamp(model.prob_bot(x.row(r)), 0.0, 1.0);
  return p;
}

std::vector<RankedAccount> rank_by_bot_probability(const TrainedModel& model, const Dataset& dataset,
                                                   std::size_t top_n) {
  if (top_n == 0 || dataset.records.empty()) return {};
  const auto p = score_accounts(model, dataset);
  std::vector<RankedAccount> ranked;
  ranked.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) ranked.push_back({dataset.records[i].id, p[i]});
  std::sort(ranked.begin(), ranked.end(), [](const RankedAccount& a, const RankedAccount& b) {
    return a.p_bot > b.p_bot || (a.p_bot == b.p_bot && a.id < b.id);
  });
  ranked.resize(std::min(top_n, ranked.size()));
  return ranked;
}

nlohmann::ordered_json to_json(const Metrics& m) {
  nlohmann::ordered_json j{{"accuracy", m.accuracy}, {"precision", m.precision},
                           {"recall", m.recall}, {"f1", m.f1}};
  if (m.roc_auc) j["roc_auc"] = *m.roc_auc;
  return j;
}

nlohmann::ordered_json to_json(const CvReport& r) {
  nlohmann::ordered_json j;
  j["mean"] = to_json(r.mean);
  auto& folds = j["folds"] = nlohmann::ordered_json::array();
  for (const auto& f : r.folds) folds.push_back(to_json(f));
  j["fold_of_row"] = r.fold_of_row;
  return j;
}

nlohmann::ordered_json to_json(const ComparisonReport& r) {
  nlohmann::ordered_json j;
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"metric", row.metric},
                    {"basic_mean", row.basic_mean},
                    {"basic_band", row.basic_band},
                    {"all_mean", row.all_mean},
                    {"all_band", row.all_band},
                    {"p_value", row.p_value}});
  }
  j["test_sample"] = r.test_sample;
  auto& samples = j["samples"];
  const std::array<const char*, 2> arms = {"basic", "all"};
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t m = 0; m < 4; ++m) samples[arms[a]][kMetricNames[m]] = r.samples[a][m];
  }
  return j;
}

}  // namespace igbot
