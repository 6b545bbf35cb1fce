#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "igbot/evaluation.hpp"

namespace igbot {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);  // 16 lowercase hex digits

// Identifies the build, configuration and seed that produced a report.
struct ReportHeader {
  std::string version;
  std::string config_hash;
  std::uint64_t seed = 0;
};

// {"report", "version", "config_hash", "seed", "data"}
nlohmann::ordered_json wrap_report(const ReportHeader& header, std::string_view report,
                                   nlohmann::ordered_json data);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_escape(std::string_view field);
std::string render_csv_header(const ReportHeader& header, std::string_view report);
// Header lines start with '#' and carry the reproducibility fields.
std::string render_csv(const ReportHeader& header, std::string_view report, const CsvTable& table);
std::string render_json(const nlohmann::ordered_json& j);  // two-space indent, trailing newline

// Writes bytes exactly, creating parent directories. Throws std::runtime_error
// when the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

// One row of the classification summary.
struct SummaryRow {
  std::string model;
  Metrics metrics;  // CV means; roc_auc from the held-out split
};

// Per column, true where the row attains the column maximum (ties all flagged).
// Column order: accuracy, precision, recall, f1, roc_auc.
std::vector<std::array<bool, 5>> column_maxima(const std::vector<SummaryRow>& rows);

// Fixed-width text table, one row per model and one column per metric;
// column maxima are marked with '*'.
std::string format_summary_table(const std::vector<SummaryRow>& rows);

}  // namespace igbot
