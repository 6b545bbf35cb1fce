#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "igbot/report.hpp"

using namespace igbot;

TEST(Fnv, PublishedVectors) {
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
  EXPECT_EQ(hex64(fnv1a64("foobar")), "85944171f73967e8");
  EXPECT_EQ(hex64(1), "0000000000000001");
}

TEST(WrapReport, KeyOrder) {
  const auto j = wrap_report({"v1", "abc", 7}, "cv", {{"x", 1}});
  EXPECT_EQ(j.dump(), R"({"report":"cv","version":"v1","config_hash":"abc","seed":7,"data":{"x":1}})");
  EXPECT_EQ(render_json(nlohmann::ordered_json{{"a", 1}}), "{\n  \"a\": 1\n}\n");
}

TEST(Csv, EscapingAndLayout) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  const CsvTable t{{"name", "value"}, {{"x", "1"}, {"y,z", "2"}}};
  EXPECT_EQ(render_csv({"v1", "abc", 7}, "demo", t),
            "# report=demo\n# version=v1\n# config_hash=abc\n# seed=7\nname,value\nx,1\n\"y,z\",2\n");
  const CsvTable ragged{{"a", "b"}, {{"1"}}};
  EXPECT_THROW(render_csv({}, "r", ragged), std::invalid_argument);
}

TEST(WriteTextFile, CreatesParentsAndWritesExactBytes) {
  const auto dir = std::filesystem::temp_directory_path() / "igbot_report_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "a" / "b.txt";
  write_text_file(path, "x\ny");
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "x\ny");
  EXPECT_THROW(write_text_file(dir / "a", "dir in the way"), std::runtime_error);
}

TEST(Summary, ColumnMaximaFlagTies) {
  std::vector<SummaryRow> rows = {{"A", {0.9, 0.8, 0.7, 0.75, 0.95}}, {"B", {0.9, 0.85, 0.6, 0.7, std::nullopt}}};
  const auto f = column_maxima(rows);
  EXPECT_EQ(f[0], (std::array<bool, 5>{true, false, true, true, true}));
  EXPECT_EQ(f[1], (std::array<bool, 5>{true, true, false, false, false}));
  const auto table = format_summary_table(rows);
  EXPECT_NE(table.find("0.90*"), std::string::npos);
  EXPECT_NE(table.find("0.85*"), std::string::npos);
  EXPECT_NE(table.find("0.95*"), std::string::npos);
  EXPECT_NE(table.find(" | -"), std::string::npos);
  EXPECT_EQ(table.substr(0, 9), "The model");
}
