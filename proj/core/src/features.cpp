#include "igbot/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "igbot/format.hpp"

namespace igbot {

bool is_behavioral_feature(std::string_view name) {
  for (std::size_t i = kBasicFeatureCount; i < kFeatureCount; ++i) {
    if (kFeatureNames[i] == name) return true;
  }
  return false;
}

namespace {

double histogram_entropy(const std::vector<std::size_t>& counts, std::size_t n) {
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

// Integer timestamps bin exactly: bin = floor((t - min) * bins / (max - min)).
double offset_entropy(const std::vector<std::int64_t>& sorted, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("shannon_entropy: bins must be >= 1");
  if (sorted.size() < 2 || sorted.front() == sorted.back()) return 0.0;
  __extension__ typedef unsigned __int128 wide;
  const auto width = static_cast<wide>(static_cast<std::uint64_t>(sorted.back() - sorted.front()));
  std::vector<std::size_t> counts(bins, 0);
  for (auto t : sorted) {
    const auto d = static_cast<wide>(static_cast<std::uint64_t>(t - sorted.front()));
    const auto b = static_cast<std::size_t>(d * bins / width);
    counts[std::min(b, bins - 1)]++;
  }
  return histogram_entropy(counts, sorted.size());
}

}  // namespace

double shannon_entropy(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("shannon_entropy: bins must be >= 1");
  if (values.size() < 2) return 0.0;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double width = *hi_it - lo;
  if (!(width > 0.0)) return 0.0;

  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width * static_cast<double>(bins));
    counts[std::min(b, bins - 1)]++;
  }
  return histogram_entropy(counts, values.size());
}

BehaviorStats behavioral_measures(std::span<const std::int64_t> post_times,
                                  std::size_t entropy_bins) {
  BehaviorStats s;
  if (post_times.empty()) return s;

  std::vector<std::int64_t> sorted(post_times.begin(), post_times.end());
  std::sort(sorted.begin(), sorted.end());
  const std::int64_t origin = sorted.front();
  const std::size_t n = sorted.size();

  // Moments are taken on offsets from the earliest post, which are exact in
  // double precision and make spread/shape measures exactly shift invariant.
  std::vector<double> offsets(n);
  for (std::size_t i = 0; i < n; ++i) offsets[i] = static_cast<double>(sorted[i] - origin);

  double sum = 0.0;
  for (double v : offsets) sum += v;
  const double mean_offset = sum / static_cast<double>(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : offsets) {
    const double d = v - mean_offset;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);

  const double base = static_cast<double>(origin);
  s.min = base;
  s.max = static_cast<double>(sorted.back());
  s.mean = base + mean_offset;
  if (n % 2 == 1) {
    s.median = static_cast<double>(sorted[n / 2]);
  } else {
    s.median = base + 0.5 * (offsets[n / 2 - 1] + offsets[n / 2]);
  }
  s.std = std::sqrt(m2);
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2) - 3.0;
  }
  s.entropy = offset_entropy(sorted, entropy_bins);
  return s;
}

double FeatureVector::operator[](std::string_view name) const {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kFeatureNames[i] == name) return values[i];
  }
  throw std::out_of_range("unknown feature '" + std::string(name) + "'");
}

BehaviorStats FeatureVector::behavior() const {
  const auto* b = values.data() + kBasicFeatureCount;
  return {b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7]};
}

FeatureVector assemble_features(const AccountRecord& record, std::size_t entropy_bins) {
  FeatureVector fv;
  fv.label = record.label;
  fv.values[0] = static_cast<double>(record.username_length);
  fv.values[1] = static_cast<double>(record.full_name_length);
  fv.values[2] = static_cast<double>(record.biography_length);
  fv.values[3] = static_cast<double>(record.followers_count);
  fv.values[4] = static_cast<double>(record.followings_count);
  const auto b = behavioral_measures(record.post_times, entropy_bins);
  const std::array<double, 8> behavior = {b.min,  b.max,      b.mean,     b.median,
                                          b.std,  b.skewness, b.kurtosis, b.entropy};
  std::copy(behavior.begin(), behavior.end(), fv.values.begin() + kBasicFeatureCount);
  for (double& v : fv.values) {
    if (!std::isfinite(v)) v = 0.0;
  }
  return fv;
}

std::size_t FeatureMatrix::column_index(std::string_view name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("unknown feature '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names.begin());
}

FeatureMatrix FeatureMatrix::select_features(std::span<const std::string> keep) const {
  std::vector<std::size_t> cols;
  cols.reserve(keep.size());
  for (const auto& name : keep) cols.push_back(column_index(name));
  return {std::vector<std::string>(keep.begin(), keep.end()), ids, x.select_cols(cols), y};
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> idx) const {
  return {names, select(ids, idx), x.select_rows(idx), select(y, idx)};
}

FeatureMatrix FeatureMatrix::labelled() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != kUnlabelled) idx.push_back(i);
  }
  return select_rows(idx);
}

FeatureMatrix build_feature_matrix(const Dataset& dataset, std::size_t entropy_bins) {
  FeatureMatrix fm;
  fm.names = all_feature_names();
  fm.x = Matrix(dataset.records.size(), kFeatureCount);
  fm.ids.reserve(dataset.records.size());
  fm.y.reserve(dataset.records.size());
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& rec = dataset.records[i];
    const auto fv = assemble_features(rec, entropy_bins);
    std::copy(fv.values.begin(), fv.values.end(), fm.x.row(i).begin());
    fm.ids.push_back(rec.id);
    fm.y.push_back(rec.label == Label::bot       ? kBot
                   : rec.label == Label::genuine ? kGenuine
                                                 : kUnlabelled);
  }
  return fm;
}

std::vector<std::string> all_feature_names() {
  return {kFeatureNames.begin(), kFeatureNames.end()};
}

std::vector<std::string> basic_feature_names() {
  return {kFeatureNames.begin(), kFeatureNames.begin() + kBasicFeatureCount};
}

void write_feature_csv(const FeatureMatrix& features, std::ostream& out) {
  for (const auto& name : features.names) out << name << ',';
  out << "label\n";
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.x.cols(); ++c) out << format_double(features.x(r, c)) << ',';
    const int y = features.y[r];
    out << (y == kBot ? "bot" : y == kGenuine ? "genuine" : "unknown") << '\n';
  }
}

}  // namespace igbot
