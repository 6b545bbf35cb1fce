#include "igbot/account.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "igbot/error.hpp"

namespace igbot {

std::string_view to_string(Label label) {
  switch (label) {
    case Label::genuine:
      return "genuine";
    case Label::bot:
      return "bot";
    case Label::unknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "genuine") return Label::genuine;
  if (text == "bot") return Label::bot;
  if (text == "unknown") return Label::unknown;
  return std::nullopt;
}

std::vector<std::string> validate_record(const AccountRecord& record) {
  std::vector<std::string> violations;
  auto non_negative = [&](std::int64_t value, const char* name) {
    if (value < 0) {
      violations.push_back(std::string(name) + " must be >= 0 (got " + std::to_string(value) + ")");
    }
  };
  non_negative(record.username_length, "username_length");
  non_negative(record.full_name_length, "full_name_length");
  non_negative(record.biography_length, "biography_length");
  non_negative(record.followers_count, "followers_count");
  non_negative(record.followings_count, "followings_count");
  for (std::size_t i = 0; i < record.post_times.size(); ++i) {
    if (record.post_times[i] < 0) {
      violations.push_back("post_times[" + std::to_string(i) + "] must be >= 0");
      break;
    }
  }
  if (!record.provider.empty() && record.label != Label::bot) {
    violations.push_back("provider/label mismatch: provider '" + record.provider +
                         "' set on a record labelled " + std::string(to_string(record.label)));
  }
  return violations;
}

nlohmann::ordered_json to_json(const AccountRecord& record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["label"] = std::string(to_string(record.label));
  j["provider"] = record.provider.empty() ? nlohmann::ordered_json(nullptr)
                                          : nlohmann::ordered_json(record.provider);
  j["username_length"] = record.username_length;
  j["full_name_length"] = record.full_name_length;
  j["biography_length"] = record.biography_length;
  j["followers_count"] = record.followers_count;
  j["followings_count"] = record.followings_count;
  j["post_times"] = record.post_times;
  return j;
}

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("missing field '") + key + "'");
  return *it;
}

std::int64_t require_int(const nlohmann::json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number_integer()) throw DataError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

AccountRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("record must be a JSON object");
  AccountRecord r;
  const auto& id = require(j, "id");
  if (!id.is_string()) throw DataError("field 'id' must be a string");
  r.id = id.get<std::string>();

  const auto& label = require(j, "label");
  if (!label.is_string()) throw DataError("field 'label' must be a string");
  auto parsed = parse_label(label.get<std::string>());
  if (!parsed) throw DataError("field 'label' must be one of bot|genuine|unknown");
  r.label = *parsed;

  if (auto it = j.find("provider"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw DataError("field 'provider' must be a string or null");
    r.provider = it->get<std::string>();
  }
  r.username_length = require_int(j, "username_length");
  r.full_name_length = require_int(j, "full_name_length");
  r.biography_length = require_int(j, "biography_length");
  r.followers_count = require_int(j, "followers_count");
  r.followings_count = require_int(j, "followings_count");

  const auto& times = require(j, "post_times");
  if (!times.is_array()) throw DataError("field 'post_times' must be an array");
  r.post_times.reserve(times.size());
  for (const auto& t : times) {
    if (!t.is_number_integer()) throw DataError("field 'post_times' must hold integers");
    r.post_times.push_back(t.get<std::int64_t>());
  }
  return r;
}

Dataset parse_dataset(std::istream& in, std::string source) {
  Dataset ds;
  ds.provenance.source = std::move(source);
  ds.provenance.loaded_at = std::chrono::duration_cast<std::chrono::seconds>(
                                std::chrono::system_clock::now().time_since_epoch())
                                .count();
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& what) {
      throw DataError(ds.provenance.source + ":" + std::to_string(line_no) + ": " + what);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(std::string("malformed JSON: ") + e.what());
    }
    AccountRecord r;
    try {
      r = record_from_json(j);
    } catch (const DataError& e) {
      fail(e.what());
    }
    if (auto v = validate_record(r); !v.empty()) fail(v.front());
    if (!seen.insert(r.id).second) fail("duplicate id '" + r.id + "'");
    ds.records.push_back(std::move(r));
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
  if (format != DataFormat::jsonl) throw DataError("unsupported dataset format");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  return parse_dataset(in, path.string());
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
  for (const auto& r : dataset.records) out << to_json(r).dump() << '\n';
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset '" + path.string() + "'");
  write_dataset(dataset, out);
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace igbot
