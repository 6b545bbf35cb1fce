#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "igbot/error.hpp"
#include "igbot/format.hpp"
#include "igbot/pipeline.hpp"
#include "igbot/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct SharedOptions {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::string data;
  std::optional<double> separability;
};

void add_shared(CLI::App* sub, SharedOptions& o) {
  sub->add_option("--seed", o.seed, "Master seed (also seeds the synthetic generator)");
  sub->add_option("--config", o.config, "Pipeline config JSON file");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--data", o.data, "JSONL dataset; replaces the synthetic benchmark");
  sub->add_option("--separability", o.separability, "Synthetic benchmark difficulty in [0, 1]");
}

igbot::PipelineConfig resolve(const SharedOptions& o) {
  auto cfg = o.config.empty() ? igbot::PipelineConfig::defaults() : igbot::load_pipeline_config(o.config);
  if (!o.data.empty()) {
    cfg.dataset_path = o.data;
    cfg.synth.reset();
  }
  if (o.separability) {
    if (!cfg.synth) throw igbot::ConfigError("--separability applies only to the synthetic benchmark");
    cfg.synth->separability = *o.separability;
  }
  if (o.seed) {
    cfg.seed = *o.seed;
    if (cfg.synth) cfg.synth->seed = *o.seed;
  }
  if (!o.out.empty()) cfg.out_dir = o.out;
  cfg.validate();
  return cfg;
}

void report_files(const igbot::Pipeline& p, const std::vector<std::string>& files) {
  for (const auto& f : files) std::cerr << "wrote " << (p.config().out_dir / f).string() << '\n';
}

void print_comparison(const igbot::ComparisonReport& r) {
  std::printf("%-10s | %-14s | %-14s | %s\n", "Measure", "Basic Features", "All features", "p-value");
  for (const auto& row : r.rows) {
    const auto basic = igbot::format_fixed(row.basic_mean, 2) + " +/- " + igbot::format_fixed(row.basic_band, 2);
    const auto all = igbot::format_fixed(row.all_mean, 2) + " +/- " + igbot::format_fixed(row.all_band, 2);
    std::printf("%-10s | %-14s | %-14s | %s\n", row.metric.c_str(), basic.c_str(), all.c_str(),
                igbot::format_fixed(row.p_value, 2).c_str());
  }
}

void print_confidence(const igbot::ConfidenceReport& r) {
  std::printf("%-16s | %s\n", "Class", "Confidence interval");
  std::printf("%-16s | %s\n", "Bots", igbot::format_interval(r.bots).c_str());
  std::printf("%-16s | %s\n", "Genuine Accounts", igbot::format_interval(r.genuine).c_str());
}

void print_holdout(const std::vector<igbot::HoldoutIteration>& its) {
  std::printf("%-10s", "Measure");
  for (const auto& it : its) std::printf(" | %-6s", it.provider.c_str());
  std::printf("\n");
  for (std::size_t m = 0; m < igbot::kMetricNames.size(); ++m) {
    std::printf("%-10s", igbot::kMetricNames[m]);
    for (const auto& it : its) std::printf(" | %-6s", igbot::format_fixed(igbot::metric_value(it.metrics, m), 2).c_str());
    std::printf("\n");
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Instagram bot detection from posting behavior"};
  app.set_version_flag("--version", std::string(igbot::kVersion));
  app.require_subcommand(1);

  SharedOptions o;
  std::string action;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen", "Generate the synthetic benchmark dataset (dataset.jsonl)"},
      {"features", "Extract the 13-feature table (tables/features.csv)"},
      {"prune", "Correlation and importance pruning (selection.json)"},
      {"train", "Fit the final model (model.json) and its confidence intervals (confidence.json)"},
      {"cv", "Cross-validate every configured model (classification.json)"},
      {"compare", "Basic vs all-features significance experiment (comparison.json)"},
      {"holdout", "Leave-one-provider-out evaluation (holdout.json)"},
      {"explain", "Importances and partial dependence (explain.json)"},
      {"rank", "Rank accounts by bot probability (ranking.json)"},
      {"pipeline", "Run every stage and write all reports plus a manifest"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_shared(sub, o);
    sub->callback([&action, name = name] { action = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  igbot::Pipeline p(resolve(o));
  std::vector<std::string> files;
  if (action == "gen") {
    files = p.write_dataset_file();
  } else if (action == "features") {
    files = p.write_features();
  } else if (action == "prune") {
    files = p.write_selection();
    std::printf("kept %zu of %zu features\n", p.selection().kept.size(), p.labelled().names.size());
  } else if (action == "train") {
    files = p.write_model();
    const auto more = p.write_confidence();
    files.insert(files.end(), more.begin(), more.end());
    print_confidence(p.confidence());
  } else if (action == "cv") {
    files = p.write_classification();
    std::fputs(p.summary().c_str(), stdout);
  } else if (action == "compare") {
    files = p.write_comparison();
    print_comparison(p.comparison());
  } else if (action == "holdout") {
    files = p.write_holdout();
    print_holdout(p.holdout());
  } else if (action == "explain") {
    files = p.write_explain();
    for (const auto& [name, value] : p.explain().importance.ranking) {
      std::printf("%-18s %s\n", name.c_str(), igbot::format_fixed(value, 4).c_str());
    }
  } else if (action == "rank") {
    files = p.write_ranking();
    for (const auto& r : p.ranking()) std::printf("%s %s\n", r.id.c_str(), igbot::format_fixed(r.p_bot, 4).c_str());
  } else {
    const auto bundle = igbot::run_pipeline(p.config());
    std::fputs(bundle.summary.c_str(), stdout);
    std::printf("wrote %zu files to %s\n", bundle.files.size(), bundle.out_dir.string().c_str());
    return kExitOk;
  }
  report_files(p, files);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const igbot::ConfigError& e) {
    std::cerr << "igbot: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const igbot::DataError& e) {
    std::cerr << "igbot: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "igbot: error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
