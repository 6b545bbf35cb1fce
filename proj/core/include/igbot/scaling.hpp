#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "igbot/matrix.hpp"

namespace igbot {

// Per-feature z-score transform. A zero std marks a constant column, which
// maps to all zeros.
struct StandardizationParams {
  std::vector<double> means;
  std::vector<double> stds;

  Matrix apply(const Matrix& x) const;
  StandardizationParams select(std::span<const std::size_t> columns) const;

  friend bool operator==(const StandardizationParams&, const StandardizationParams&) = default;
};

nlohmann::ordered_json to_json(const StandardizationParams& p);
StandardizationParams standardization_from_json(const nlohmann::json& j);

}  // namespace igbot
