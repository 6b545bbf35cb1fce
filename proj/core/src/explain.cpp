#include "igbot/explain.hpp"

#include <algorithm>
#include <stdexcept>

namespace igbot {

PdpCurve partial_dependence(const TrainedModel& model, const Matrix& x, const std::string& feature,
                            std::size_t grid_size) {
  if (grid_size < 2) throw std::invalid_argument("partial_dependence: grid_size must be >= 2");
  if (x.rows() == 0) throw std::invalid_argument("partial_dependence: empty matrix");
  if (x.cols() != model.feature_names().size()) {
    throw std::invalid_argument("partial_dependence: column count does not match the model");
  }
  const auto& names = model.feature_names();
  const auto it = std::find(names.begin(), names.end(), feature);
  if (it == names.end()) throw std::invalid_argument("partial_dependence: unknown feature '" + feature + "'");
  const auto col = static_cast<std::size_t>(it - names.begin());

  double lo = x(0, col), hi = lo;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    lo = std::min(lo, x(r, col));
    hi = std::max(hi, x(r, col));
  }

  PdpCurve curve;
  curve.feature = feature;
  if (hi > lo) {
    for (std::size_t g = 0; g < grid_size; ++g) {
      const double t = static_cast<double>(g) / static_cast<double>(grid_size - 1);
      curve.grid.push_back(g + 1 == grid_size ? hi : lo + t * (hi - lo));
    }
  } else {
    curve.grid.push_back(lo);  // a constant feature has a single grid point
  }

  std::vector<double> row(x.cols());
  for (double value : curve.grid) {
    double sum = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      auto src = x.row(r);
      std::copy(src.begin(), src.end(), row.begin());
      row[col] = value;
      sum += std::clamp(model.prob_bot(row), 0.0, 1.0);
    }
    curve.mean_p_bot.push_back(sum / static_cast<double>(x.rows()));
  }
  if (model.scaling()) {
    const double m = model.scaling()->means[col];
    const double s = model.scaling()->stds[col];
    for (double v : curve.grid) curve.grid_raw.push_back(m + v * s);
  }
  return curve;
}

ImportanceReport importance_report(const TrainedModel& model) {
  const auto imp = gini_importance(model);
  ImportanceReport report;
  for (std::size_t i = 0; i < imp.size(); ++i) report.ranking.emplace_back(model.feature_names()[i], imp[i]);
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [](const auto& a, const auto& b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  return report;
}

nlohmann::ordered_json to_json(const PdpCurve& c) {
  nlohmann::ordered_json j;
  j["feature"] = c.feature;
  j["grid"] = c.grid;
  j["mean_p_bot"] = c.mean_p_bot;
  if (!c.grid_raw.empty()) j["grid_raw"] = c.grid_raw;
  return j;
}

nlohmann::ordered_json to_json(const ImportanceReport& r) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [name, value] : r.ranking) arr.push_back({{"feature", name}, {"gini_importance", value}});
  return arr;
}

}  // namespace igbot
