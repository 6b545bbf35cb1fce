#include "igbot/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "igbot/error.hpp"
#include "igbot/random.hpp"

namespace igbot {

namespace {

constexpr double kDay = 86'400.0;

}  // namespace

void SynthConfig::validate() const {
  if (n_bots < 1) throw ConfigError("synth: n_bots must be >= 1");
  if (n_genuine < 1) throw ConfigError("synth: n_genuine must be >= 1");
  if (n_providers < 1) throw ConfigError("synth: n_providers must be >= 1");
  if (n_providers > n_bots) throw ConfigError("synth: n_providers must not exceed n_bots");
  if (!(separability >= 0.0 && separability <= 1.0)) throw ConfigError("synth: separability must lie in [0, 1]");
  if (time_origin < 0) throw ConfigError("synth: time_origin must be >= 0");
  if (time_span < 7 * 86'400) throw ConfigError("synth: time_span must cover at least a week");
}

nlohmann::ordered_json to_json(const SynthConfig& c) {
  return {{"n_bots", c.n_bots},           {"n_genuine", c.n_genuine},
          {"n_providers", c.n_providers}, {"separability", c.separability},
          {"time_origin", c.time_origin}, {"time_span", c.time_span},
          {"seed", c.seed}};
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("synth config must be an object");
  SynthConfig c;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& k = it.key();
      if (k == "n_bots") c.n_bots = it->get<std::int64_t>();
      else if (k == "n_genuine") c.n_genuine = it->get<std::int64_t>();
      else if (k == "n_providers") c.n_providers = it->get<std::int64_t>();
      else if (k == "separability") c.separability = it->get<double>();
      else if (k == "time_origin") c.time_origin = it->get<std::int64_t>();
      else if (k == "time_span") c.time_span = it->get<std::int64_t>();
      else if (k == "seed") c.seed = it->get<std::uint64_t>();
      else throw ConfigError("unknown synth config key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid synth config: ") + e.what());
  }
  c.validate();
  return c;
}

PostingProfile genuine_profile() {
  PostingProfile p;
  p.log_posts_mean = std::log(60.0);
  p.log_posts_sd = 0.9;
  p.log_window_days_mean = std::log(300.0);
  p.log_window_days_sd = 0.9;
  p.log_gap_days_mean = std::log(6.0);
  p.log_gap_days_sd = 1.4;
  p.cluster_fraction = 0.15;
  p.clusters = 3.0;
  p.cluster_width = 0.01;
  p.grid_fraction = 0.0;
  p.circadian = 1.0;
  p.username_mean = 11.0;
  p.username_sd = 3.0;
  p.full_name_mean = 13.0;
  p.full_name_sd = 5.0;
  p.bio_empty = 0.15;
  p.log_bio_mean = std::log(60.0);
  p.log_bio_sd = 0.9;
  p.log_followers_mean = std::log(450.0);
  p.log_followers_sd = 1.2;
  p.log_followings_mean = std::log(380.0);
  p.log_followings_sd = 0.8;
  return p;
}

PostingProfile provider_extreme(std::size_t index) {
  // Traits shared by every provider: dormant after a short campaign, thin
  // profiles, follow-heavy networks, no human day cycle.
  PostingProfile p = genuine_profile();
  p.log_gap_days_mean = std::log(120.0);
  p.log_gap_days_sd = 0.7;
  p.circadian = 0.0;
  p.username_mean = 14.0;
  p.full_name_mean = 8.0;
  p.full_name_sd = 4.0;
  p.bio_empty = 0.45;
  p.log_bio_mean = std::log(25.0);
  p.log_followers_mean = std::log(150.0);
  p.log_followers_sd = 1.0;
  p.log_followings_mean = std::log(900.0);
  p.log_followings_sd = 0.6;

  switch (index % 5) {
    case 0:  // tight bursts
      p.log_posts_mean = std::log(12.0);
      p.log_posts_sd = 0.4;
      p.log_window_days_mean = std::log(3.0);
      p.log_window_days_sd = 0.6;
      p.cluster_fraction = 0.9;
      p.clusters = 2.0;
      p.cluster_width = 0.02;
      break;
    case 1:  // uniformly scheduled
      p.log_posts_mean = std::log(30.0);
      p.log_posts_sd = 0.3;
      p.log_window_days_mean = std::log(30.0);
      p.log_window_days_sd = 0.4;
      p.cluster_fraction = 0.0;
      p.grid_fraction = 0.9;
      break;
    case 2:  // periodic over a longer campaign
      p.log_posts_mean = std::log(45.0);
      p.log_posts_sd = 0.3;
      p.log_window_days_mean = std::log(45.0);
      p.log_window_days_sd = 0.4;
      p.cluster_fraction = 0.1;
      p.grid_fraction = 0.7;
      break;
    case 3:  // front-loaded single burst
      p.log_posts_mean = std::log(20.0);
      p.log_posts_sd = 0.5;
      p.log_window_days_mean = std::log(15.0);
      p.log_window_days_sd = 0.5;
      p.cluster_fraction = 0.6;
      p.clusters = 1.0;
      p.cluster_width = 0.05;
      break;
    default:  // sparse and irregular
      p.log_posts_mean = std::log(8.0);
      p.log_posts_sd = 0.5;
      p.log_window_days_mean = std::log(40.0);
      p.log_window_days_sd = 0.5;
      p.cluster_fraction = 0.0;
      break;
  }
  return p;
}

PostingProfile interpolate(const PostingProfile& g, const PostingProfile& e, double t) {
  auto lerp = [t](double a, double b) { return std::lerp(a, b, t); };
  PostingProfile p;
  p.log_posts_mean = lerp(g.log_posts_mean, e.log_posts_mean);
  p.log_posts_sd = lerp(g.log_posts_sd, e.log_posts_sd);
  p.log_window_days_mean = lerp(g.log_window_days_mean, e.log_window_days_mean);
  p.log_window_days_sd = lerp(g.log_window_days_sd, e.log_window_days_sd);
  p.log_gap_days_mean = lerp(g.log_gap_days_mean, e.log_gap_days_mean);
  p.log_gap_days_sd = lerp(g.log_gap_days_sd, e.log_gap_days_sd);
  p.cluster_fraction = lerp(g.cluster_fraction, e.cluster_fraction);
  p.clusters = lerp(g.clusters, e.clusters);
  p.cluster_width = lerp(g.cluster_width, e.cluster_width);
  p.grid_fraction = lerp(g.grid_fraction, e.grid_fraction);
  p.circadian = lerp(g.circadian, e.circadian);
  p.username_mean = lerp(g.username_mean, e.username_mean);
  p.username_sd = lerp(g.username_sd, e.username_sd);
  p.full_name_mean = lerp(g.full_name_mean, e.full_name_mean);
  p.full_name_sd = lerp(g.full_name_sd, e.full_name_sd);
  p.bio_empty = lerp(g.bio_empty, e.bio_empty);
  p.log_bio_mean = lerp(g.log_bio_mean, e.log_bio_mean);
  p.log_bio_sd = lerp(g.log_bio_sd, e.log_bio_sd);
  p.log_followers_mean = lerp(g.log_followers_mean, e.log_followers_mean);
  p.log_followers_sd = lerp(g.log_followers_sd, e.log_followers_sd);
  p.log_followings_mean = lerp(g.log_followings_mean, e.log_followings_mean);
  p.log_followings_sd = lerp(g.log_followings_sd, e.log_followings_sd);
  return p;
}

std::string provider_name(std::size_t index) { return "p" + std::to_string(index + 1); }

namespace {

std::int64_t clamp_round(double v, std::int64_t lo, std::int64_t hi) {
  return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::llround(v)), lo, hi);
}

double lognormal(double log_mean, double log_sd, Rng& rng) {
  return std::exp(std::normal_distribution<double>(log_mean, log_sd)(rng));
}

// Hour-of-day offset (seconds) from a mixture with afternoon and late-evening peaks.
double circadian_offset(Rng& rng) {
  const bool afternoon = uniform01(rng) < 0.55;
  const double hour = afternoon ? std::normal_distribution<double>(13.0, 2.5)(rng)
                                : std::normal_distribution<double>(21.5, 2.0)(rng);
  double sec = std::fmod(hour * 3600.0, kDay);
  if (sec < 0.0) sec += kDay;
  return sec;
}

AccountRecord make_account(const PostingProfile& p, const SynthConfig& cfg, Rng& rng) {
  AccountRecord r;
  const double origin = static_cast<double>(cfg.time_origin);
  const double crawl = origin + static_cast<double>(cfg.time_span);

  r.username_length = clamp_round(std::normal_distribution<double>(p.username_mean, p.username_sd)(rng), 1, 30);
  r.full_name_length = clamp_round(std::normal_distribution<double>(p.full_name_mean, p.full_name_sd)(rng), 0, 30);
  const bool empty_bio = uniform01(rng) < p.bio_empty;
  const double bio = lognormal(p.log_bio_mean, p.log_bio_sd, rng);
  r.biography_length = empty_bio ? 0 : clamp_round(bio, 1, 150);
  r.followers_count = clamp_round(lognormal(p.log_followers_mean, p.log_followers_sd, rng), 0, 5'000'000);
  r.followings_count = clamp_round(lognormal(p.log_followings_mean, p.log_followings_sd, rng), 0, 7'500);

  const auto n_posts = clamp_round(lognormal(p.log_posts_mean, p.log_posts_sd, rng), 1, 3'000);
  const double gap = std::min(lognormal(p.log_gap_days_mean, p.log_gap_days_sd, rng) * kDay,
                              0.9 * (crawl - origin));
  const double end = crawl - gap;
  const double len = std::min(lognormal(p.log_window_days_mean, p.log_window_days_sd, rng) * kDay, end - origin);
  const double start = end - len;

  const auto n_clusters = std::max<std::int64_t>(1, std::llround(p.clusters));
  std::vector<double> centers(static_cast<std::size_t>(n_clusters));
  for (auto& c : centers) c = start + uniform01(rng) * len;

  r.post_times.reserve(static_cast<std::size_t>(n_posts));
  for (std::int64_t i = 0; i < n_posts; ++i) {
    const double kind = uniform01(rng);
    double t;
    if (kind < p.cluster_fraction) {
      const double c = centers[uniform_index(centers.size(), rng)];
      t = c + std::normal_distribution<double>(0.0, std::max(p.cluster_width * len, 60.0))(rng);
    } else if (kind < p.cluster_fraction + p.grid_fraction) {
      const double slot = (static_cast<double>(i) + 0.5) / static_cast<double>(n_posts);
      t = start + slot * len + std::normal_distribution<double>(0.0, 300.0)(rng);
    } else {
      t = start + uniform01(rng) * len;
      if (len >= 2.0 * kDay && uniform01(rng) < p.circadian) {
        t = std::floor(t / kDay) * kDay + circadian_offset(rng);
      }
    }
    r.post_times.push_back(static_cast<std::int64_t>(std::llround(std::clamp(t, origin, crawl))));
  }
  std::sort(r.post_times.begin(), r.post_times.end());
  return r;
}

}  // namespace

Dataset generate_dataset(const SynthConfig& cfg) {
  cfg.validate();
  const auto n_bots = static_cast<std::size_t>(cfg.n_bots);
  const std::size_t total = n_bots + static_cast<std::size_t>(cfg.n_genuine);
  const auto n_providers = static_cast<std::size_t>(cfg.n_providers);
  const PostingProfile genuine = genuine_profile();
  std::vector<PostingProfile> providers;
  for (std::size_t k = 0; k < n_providers; ++k) {
    providers.push_back(interpolate(genuine, provider_extreme(k), cfg.separability));
  }

  std::vector<AccountRecord> records(total);
  for (std::size_t i = 0; i < total; ++i) {
    Rng rng(unit_seed(cfg.seed, i));
    if (i < n_bots) {
      const std::size_t k = i % n_providers;
      records[i] = make_account(providers[k], cfg, rng);
      records[i].label = Label::bot;
      records[i].provider = provider_name(k);
    } else {
      records[i] = make_account(genuine, cfg, rng);
      records[i].label = Label::genuine;
    }
  }

  Rng order_rng(stage_seed(cfg.seed, 0x5eed));
  const auto order = shuffled_indices(total, order_rng);
  Dataset ds;
  ds.provenance.source = "synthgen";
  ds.records.reserve(total);
  char id[32];
  for (std::size_t pos = 0; pos < total; ++pos) {
    auto rec = std::move(records[order[pos]]);
    std::snprintf(id, sizeof(id), "acct-%06zu", pos + 1);
    rec.id = id;
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

}  // namespace igbot
