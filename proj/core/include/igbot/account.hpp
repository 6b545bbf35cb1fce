#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace igbot {

enum class Label { genuine, bot, unknown };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

// One Instagram account: profile metadata plus the creation times of its posts.
// Counts are signed so that invalid records can be represented and reported by
// validate_record instead of being silently wrapped.
struct AccountRecord {
  std::string id;
  Label label = Label::unknown;
  std::string provider;  // bot-provider tag, empty when unknown or genuine
  std::int64_t username_length = 0;
  std::int64_t full_name_length = 0;
  std::int64_t biography_length = 0;
  std::int64_t followers_count = 0;
  std::int64_t followings_count = 0;
  std::vector<std::int64_t> post_times;  // epoch seconds, UTC

  friend bool operator==(const AccountRecord&, const AccountRecord&) = default;
};

struct Provenance {
  std::string source;
  std::int64_t loaded_at = 0;  // epoch seconds
};

struct Dataset {
  std::vector<AccountRecord> records;
  Provenance provenance;
};

// Returns one human-readable message per broken invariant; empty when valid.
std::vector<std::string> validate_record(const AccountRecord& record);

nlohmann::ordered_json to_json(const AccountRecord& record);
// Throws DataError on missing or mistyped fields.
AccountRecord record_from_json(const nlohmann::json& j);

enum class DataFormat { jsonl };

// Reads one record per non-blank line. Errors name the offending line number.
Dataset load_dataset(const std::filesystem::path& path, DataFormat format = DataFormat::jsonl);
Dataset parse_dataset(std::istream& in, std::string source = "<stream>");

void write_dataset(const Dataset& dataset, std::ostream& out);
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace igbot
