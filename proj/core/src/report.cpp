#include "igbot/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "igbot/format.hpp"

namespace igbot {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

nlohmann::ordered_json wrap_report(const ReportHeader& header, std::string_view report,
                                   nlohmann::ordered_json data) {
  nlohmann::ordered_json j;
  j["report"] = std::string(report);
  j["version"] = header.version;
  j["config_hash"] = header.config_hash;
  j["seed"] = header.seed;
  j["data"] = std::move(data);
  return j;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_csv_header(const ReportHeader& header, std::string_view report) {
  std::ostringstream out;
  out << "# report=" << report << '\n'
      << "# version=" << header.version << '\n'
      << "# config_hash=" << header.config_hash << '\n'
      << "# seed=" << header.seed << '\n';
  return out.str();
}

std::string render_csv(const ReportHeader& header, std::string_view report, const CsvTable& table) {
  std::ostringstream out;
  out << render_csv_header(header, report);
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(fields[i]);
    }
    out << '\n';
  };
  line(table.columns);
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::invalid_argument("csv row width mismatch");
    line(row);
  }
  return out.str();
}

std::string render_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

double summary_cell(const Metrics& m, std::size_t col) {
  return col < 4 ? metric_value(m, col) : m.roc_auc.value_or(-1.0);
}

}  // namespace

std::vector<std::array<bool, 5>> column_maxima(const std::vector<SummaryRow>& rows) {
  std::vector<std::array<bool, 5>> flags(rows.size());
  for (std::size_t col = 0; col < 5; ++col) {
    double best = -1.0;
    for (const auto& r : rows) best = std::max(best, summary_cell(r.metrics, col));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      flags[i][col] = best >= 0.0 && summary_cell(rows[i].metrics, col) == best;
    }
  }
  return flags;
}

std::string format_summary_table(const std::vector<SummaryRow>& rows) {
  const auto flags = column_maxima(rows);
  std::size_t name_width = 9;
  for (const auto& r : rows) name_width = std::max(name_width, r.model.size());
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-*s | %-9s | %-9s | %-9s | %-9s | %-9s\n", static_cast<int>(name_width),
                "The model", "Accuracy", "Precision", "Recall", "F-1", "ROC AUC");
  out << buf;
  out << std::string(name_width, '-') << "-+-----------+-----------+-----------+-----------+----------\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%-*s", static_cast<int>(name_width), rows[i].model.c_str());
    out << buf;
    for (std::size_t col = 0; col < 5; ++col) {
      const double v = summary_cell(rows[i].metrics, col);
      std::string cell = v < 0.0 ? "-" : format_fixed(v, 2);
      if (flags[i][col]) cell += '*';
      std::snprintf(buf, sizeof(buf), " | %-9s", cell.c_str());
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace igbot
