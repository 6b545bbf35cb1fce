#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "igbot/account.hpp"

namespace igbot {

struct SynthConfig {
  std::int64_t n_bots = 1000;
  std::int64_t n_genuine = 1000;
  std::int64_t n_providers = 5;
  double separability = 0.8;
  std::int64_t time_origin = 1'514'764'800;  // 2018-01-01T00:00:00Z
  std::int64_t time_span = 2 * 365 * 86'400;
  std::uint64_t seed = 42;

  void validate() const;  // throws ConfigError
  friend bool operator==(const SynthConfig&, const SynthConfig&) = default;
};

nlohmann::ordered_json to_json(const SynthConfig& c);
SynthConfig synth_config_from_json(const nlohmann::json& j);  // throws ConfigError

// Parameters of one account-generating profile. Every class and provider is
// an instance of the same family; separability moves bot profiles from the
// genuine parameters toward their provider's extreme.
struct PostingProfile {
  double log_posts_mean = 0.0;
  double log_posts_sd = 0.0;
  double log_window_days_mean = 0.0;  // length of the active posting window
  double log_window_days_sd = 0.0;
  double log_gap_days_mean = 0.0;  // silence between last post and crawl time
  double log_gap_days_sd = 0.0;
  double cluster_fraction = 0.0;  // share of posts placed in bursts
  double clusters = 1.0;
  double cluster_width = 0.0;     // burst sd as a fraction of the window
  double grid_fraction = 0.0;     // share of posts on a regular schedule
  double circadian = 0.0;         // share of posts following the two-peak day cycle
  double username_mean = 0.0;
  double username_sd = 0.0;
  double full_name_mean = 0.0;
  double full_name_sd = 0.0;
  double bio_empty = 0.0;
  double log_bio_mean = 0.0;
  double log_bio_sd = 0.0;
  double log_followers_mean = 0.0;
  double log_followers_sd = 0.0;
  double log_followings_mean = 0.0;
  double log_followings_sd = 0.0;

  friend bool operator==(const PostingProfile&, const PostingProfile&) = default;
};

PostingProfile genuine_profile();
// Extreme (separability = 1) profile of provider `index` (0-based, cycles).
PostingProfile provider_extreme(std::size_t index);
PostingProfile interpolate(const PostingProfile& genuine, const PostingProfile& extreme, double t);

std::string provider_name(std::size_t index);  // "p1", "p2", ...

// Deterministic per seed. Bots are assigned round-robin to providers; record
// order is a seeded shuffle and ids carry no label information.
Dataset generate_dataset(const SynthConfig& config);

}  // namespace igbot
