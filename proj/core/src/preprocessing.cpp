#include "igbot/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "igbot/classifiers.hpp"
#include "igbot/error.hpp"
#include "igbot/random.hpp"

namespace igbot {

Matrix StandardizationParams::apply(const Matrix& x) const {
  if (x.cols() != means.size()) throw std::invalid_argument("standardization: column count mismatch");
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      out(r, c) = stds[c] > 0.0 ? (x(r, c) - means[c]) / stds[c] : 0.0;
    }
  }
  return out;
}

StandardizationParams StandardizationParams::select(std::span<const std::size_t> columns) const {
  return {igbot::select(means, columns), igbot::select(stds, columns)};
}

nlohmann::ordered_json to_json(const StandardizationParams& p) {
  return {{"means", p.means}, {"stds", p.stds}};
}

StandardizationParams standardization_from_json(const nlohmann::json& j) {
  StandardizationParams p{j.at("means").get<std::vector<double>>(),
                          j.at("stds").get<std::vector<double>>()};
  if (p.means.size() != p.stds.size()) throw std::invalid_argument("scaling: length mismatch");
  return p;
}

Standardized z_standardize(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("z_standardize: empty matrix");
  StandardizationParams p;
  p.means.assign(x.cols(), 0.0);
  p.stds.assign(x.cols(), 0.0);
  const double n = static_cast<double>(x.rows());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
    mean /= n;
    double var = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) var += (x(r, c) - mean) * (x(r, c) - mean);
    var /= n;
    p.means[c] = mean;
    // Columns whose spread is rounding noise relative to their magnitude are constant.
    const double sd = std::sqrt(var);
    p.stds[c] = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 0.0;
  }
  Matrix z = p.apply(x);
  return {std::move(z), std::move(p)};
}

FeatureMatrix standardize_features(const FeatureMatrix& fm, StandardizationParams* params_out) {
  auto [z, params] = z_standardize(fm.x);
  if (params_out) *params_out = params;
  return {fm.names, fm.ids, std::move(z), fm.y};
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson_correlation: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson_correlation: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Split train_test_split(std::size_t n, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("train_test_split: test_fraction must lie in (0, 1)");
  }
  if (n < 2) throw std::invalid_argument("train_test_split: need at least two rows");
  Rng rng(seed);
  const auto perm = shuffled_indices(n, rng);
  const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
  Split s;
  s.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  s.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  return s;
}

FeatureSelection prune_features(const FeatureMatrix& fm, double corr_threshold,
                                double importance_threshold, std::uint64_t seed) {
  if (!(corr_threshold > 0.0) || std::isnan(corr_threshold)) {
    throw ConfigError("prune_features: corr_threshold must be > 0");
  }
  if (!(importance_threshold >= 0.0 && importance_threshold <= 1.0)) {
    throw ConfigError("prune_features: importance_threshold must lie in [0, 1]");
  }
  if (fm.x.cols() < 2) throw std::invalid_argument("prune_features: need at least two features");

  FeatureSelection sel;
  const auto forest = fit(ModelSpec::defaults(ModelKind::rforest), fm.x, fm.y, seed, fm.names);
  sel.reference_importance = gini_importance(forest);

  std::vector<std::size_t> survivors;
  for (std::size_t c = 0; c < fm.names.size(); ++c) {
    if (sel.reference_importance[c] < importance_threshold) {
      sel.dropped_unimportant.push_back({fm.names[c], sel.reference_importance[c]});
    } else {
      survivors.push_back(c);
    }
  }

  std::vector<std::vector<double>> columns(fm.x.cols());
  for (auto c : survivors) columns[c] = fm.x.column(c);
  std::set<std::size_t> dropped;
  for (std::size_t a = 0; a < survivors.size(); ++a) {
    if (dropped.contains(survivors[a])) continue;
    for (std::size_t b = a + 1; b < survivors.size(); ++b) {
      if (dropped.contains(survivors[b])) continue;
      const double r = pearson_correlation(columns[survivors[a]], columns[survivors[b]]);
      if (std::abs(r) >= corr_threshold) {
        dropped.insert(survivors[b]);
        sel.dropped_correlated.push_back({fm.names[survivors[b]], fm.names[survivors[a]], r});
      }
    }
  }
  for (auto c : survivors) {
    if (!dropped.contains(c)) sel.kept.push_back(fm.names[c]);
  }
  return sel;
}

nlohmann::ordered_json to_json(const FeatureSelection& s) {
  nlohmann::ordered_json j;
  j["kept"] = s.kept;
  auto& corr = j["dropped_correlated"] = nlohmann::ordered_json::array();
  for (const auto& d : s.dropped_correlated) {
    corr.push_back({{"dropped", d.dropped}, {"kept_partner", d.kept_partner}, {"r", d.r}});
  }
  auto& imp = j["dropped_unimportant"] = nlohmann::ordered_json::array();
  for (const auto& d : s.dropped_unimportant) {
    imp.push_back({{"name", d.name}, {"importance", d.importance}});
  }
  j["reference_importance"] = s.reference_importance;
  return j;
}

FeatureSelection feature_selection_from_json(const nlohmann::json& j) {
  try {
    FeatureSelection s;
    s.kept = j.at("kept").get<std::vector<std::string>>();
    for (const auto& d : j.at("dropped_correlated")) {
      s.dropped_correlated.push_back({d.at("dropped").get<std::string>(),
                                      d.at("kept_partner").get<std::string>(),
                                      d.at("r").get<double>()});
    }
    for (const auto& d : j.at("dropped_unimportant")) {
      s.dropped_unimportant.push_back({d.at("name").get<std::string>(), d.at("importance").get<double>()});
    }
    if (j.contains("reference_importance")) {
      s.reference_importance = j.at("reference_importance").get<std::vector<double>>();
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed feature selection: ") + e.what());
  }
}

}  // namespace igbot
