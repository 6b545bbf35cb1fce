#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "igbot/classifiers.hpp"
#include "igbot/matrix.hpp"

namespace igbot {

struct PdpCurve {
  std::string feature;
  std::vector<double> grid;        // model-space (standardized) values, ascending
  std::vector<double> mean_p_bot;  // aligned with grid
  std::vector<double> grid_raw;    // grid mapped back to original units, if scaling is known
};

inline constexpr std::size_t kDefaultPdpGridSize = 50;

// Sweeps one feature over grid_size evenly spaced values spanning its range
// in `x`, overwriting it in every row and averaging p_bot. Throws
// std::invalid_argument for an unknown feature or grid_size < 2.
PdpCurve partial_dependence(const TrainedModel& model, const Matrix& x, const std::string& feature,
                            std::size_t grid_size = kDefaultPdpGridSize);

struct ImportanceReport {
  std::vector<std::pair<std::string, double>> ranking;  // descending, ties by name
};

ImportanceReport importance_report(const TrainedModel& model);

nlohmann::ordered_json to_json(const PdpCurve& c);
nlohmann::ordered_json to_json(const ImportanceReport& r);

}  // namespace igbot
