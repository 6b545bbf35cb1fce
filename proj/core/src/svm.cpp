#include "igbot/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "igbot/random.hpp"

namespace igbot {

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
  if (type == KernelType::rbf) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      sq += d * d;
    }
    return std::exp(-gamma * sq);
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  if (type == KernelType::linear) return dot;
  const double base = gamma * dot + coef0;
  double out = 1.0;
  for (int i = 0; i < degree; ++i) out *= base;
  return out;
}

double scale_gamma(const Matrix& x) {
  const auto& v = x.data();
  if (v.empty()) return 1.0;
  double mean = 0.0;
  for (double e : v) mean += e;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double e : v) var += (e - mean) * (e - mean);
  var /= static_cast<double>(v.size());
  return var > 0.0 ? 1.0 / (static_cast<double>(x.cols()) * var) : 1.0;
}

namespace {

constexpr double kTau = 1e-12;

}  // namespace

SmoResult solve_smo(const Matrix& x, std::span<const int> labels, const Kernel& kernel,
                    const SmoOptions& options) {
  const std::size_t n = x.rows();
  if (n == 0) throw std::invalid_argument("solve_smo: empty input");
  if (labels.size() != n) throw std::invalid_argument("solve_smo: label count mismatch");
  if (!(options.c > 0.0)) throw std::invalid_argument("solve_smo: C must be > 0");

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == kBot ? 1.0 : -1.0;

  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel(x.row(i), x.row(j));
      k[i * n + j] = v;
      k[j * n + i] = v;
    }
  }
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * k[i * n + j]; };

  const double c = options.c;
  const std::size_t max_iter =
      options.max_iterations ? options.max_iterations : std::max<std::size_t>(10'000'000, 100 * n);

  SmoResult res;
  res.alpha.assign(n, 0.0);
  auto& alpha = res.alpha;
  std::vector<double> grad(n, -1.0);

  while (res.iterations < max_iter) {
    // Maximal violating index from the "up" set, partner by second-order gain.
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t ii = -1, jj = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0 ? alpha[t] < c : alpha[t] > 0.0) {
        const double v = -y[t] * grad[t];
        if (v >= gmax) {
          gmax = v;
          ii = static_cast<std::ptrdiff_t>(t);
        }
      }
    }
    if (ii < 0) {
      res.converged = true;
      break;
    }
    const auto i = static_cast<std::size_t>(ii);
    double best_obj = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (!(y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < c)) continue;
      const double v = y[t] * grad[t];
      gmax2 = std::max(gmax2, v);
      const double grad_diff = gmax + v;
      if (grad_diff > 0.0) {
        double quad = k[i * n + i] + k[t * n + t] - 2.0 * y[i] * y[t] * k[i * n + t];
        if (quad <= 0.0) quad = kTau;
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj <= best_obj) {
          best_obj = obj;
          jj = static_cast<std::ptrdiff_t>(t);
        }
      }
    }
    if (gmax + gmax2 < options.tolerance || jj < 0) {
      res.converged = true;
      break;
    }
    const auto j = static_cast<std::size_t>(jj);
    ++res.iterations;

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = k[i * n + i] + k[j * n + j] + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = k[i * n + i] + k[j * n + j] - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(i, t) * di + q(j, t) * dj;
  }

  // Bias from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -ub;
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (ub + lb);
  res.bias = -rho;
  return res;
}

double platt_probability(const PlattParams& p, double f) {
  const double z = p.a * f + p.b;
  return z >= 0.0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
}

PlattParams platt_fit(std::span<const double> f, std::span<const int> y) {
  if (f.size() != y.size()) throw std::invalid_argument("platt_fit: length mismatch");
  double prior1 = 0.0, prior0 = 0.0;
  for (int v : y) (v == kBot ? prior1 : prior0) += 1.0;
  if (prior1 == 0.0 || prior0 == 0.0) throw std::invalid_argument("platt_fit: both classes required");

  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;
  constexpr double kEps = 1e-8;

  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) t[i] = y[i] == kBot ? hi : lo;

  auto objective = [&](double a, double b) {
    double v = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double z = f[i] * a + b;
      v += z >= 0.0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return v;
  };

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  double fval = objective(a, b);
  for (int iter = 0; iter < kMaxIter; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double z = f[i] * a + b;
      double p, q;
      if (z >= 0.0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += f[i] * f[i] * d2;
      h22 += d2;
      h21 += f[i] * d2;
      const double d1 = t[i] - p;
      g1 += f[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;

    double step = 1.0;
    while (step >= kMinStep) {
      const double na = a + step * da;
      const double nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }
  return {a, b};
}

SvmClassifier SvmClassifier::fit(const SvmParams& params, const Matrix& x, std::span<const int> y,
                                 std::uint64_t seed) {
  if (x.rows() < 2) throw std::invalid_argument("svm: at least two rows required");
  bool has_bot = false, has_genuine = false;
  for (int v : y) (v == kBot ? has_bot : has_genuine) = true;
  if (!has_bot || !has_genuine) throw std::invalid_argument("svm: both classes required");

  SvmClassifier model;
  model.kernel_ = {params.kernel, params.degree, params.gamma.value_or(scale_gamma(x)), params.coef0};
  model.probabilistic_ = params.probabilistic_approximations;
  const SmoOptions opts{params.c, params.tolerance, 0};

  auto train = [&](const Matrix& xs, std::span<const int> ys) {
    SvmClassifier part;
    part.kernel_ = model.kernel_;
    const auto res = solve_smo(xs, ys, part.kernel_, opts);
    std::vector<std::size_t> sv;
    for (std::size_t i = 0; i < res.alpha.size(); ++i) {
      if (res.alpha[i] > 0.0) {
        sv.push_back(i);
        part.coef_.push_back(res.alpha[i] * (ys[i] == kBot ? 1.0 : -1.0));
      }
    }
    part.support_ = xs.select_rows(sv);
    part.bias_ = res.bias;
    return part;
  };

  if (model.probabilistic_) {
    // Decision values for calibration come from a 3-fold cross-fit so the
    // sigmoid is not fitted on in-sample margins.
    constexpr std::size_t kFolds = 3;
    Rng rng(seed);
    const auto perm = shuffled_indices(x.rows(), rng);
    std::vector<double> dec(x.rows(), 0.0);
    for (std::size_t fold = 0; fold < kFolds; ++fold) {
      std::vector<std::size_t> tr, te;
      for (std::size_t i = 0; i < perm.size(); ++i) (i % kFolds == fold ? te : tr).push_back(perm[i]);
      if (te.empty()) continue;
      const Labels ytr = select(Labels(y.begin(), y.end()), tr);
      const bool bot = std::find(ytr.begin(), ytr.end(), kBot) != ytr.end();
      const bool gen = std::find(ytr.begin(), ytr.end(), kGenuine) != ytr.end();
      if (bot && gen) {
        const auto part = train(x.select_rows(tr), ytr);
        for (auto r : te) dec[r] = part.decision_value(x.row(r));
      } else {
        for (auto r : te) dec[r] = bot ? 1.0 : -1.0;
      }
    }
    model.platt_ = platt_fit(dec, y);
  }

  auto full = train(x, y);
  model.support_ = std::move(full.support_);
  model.coef_ = std::move(full.coef_);
  model.bias_ = full.bias_;
  return model;
}

double SvmClassifier::decision_value(std::span<const double> row) const {
  double f = bias_;
  for (std::size_t i = 0; i < coef_.size(); ++i) f += coef_[i] * kernel_(support_.row(i), row);
  return f;
}

double SvmClassifier::prob_bot(std::span<const double> row) const {
  const double f = decision_value(row);
  if (!probabilistic_) return f > 0.0 ? 1.0 : 0.0;
  return platt_probability(platt_, f);
}

nlohmann::ordered_json SvmClassifier::to_json() const {
  nlohmann::ordered_json j;
  j["kernel"] = {{"type", static_cast<int>(kernel_.type)},
                 {"degree", kernel_.degree},
                 {"gamma", kernel_.gamma},
                 {"coef0", kernel_.coef0}};
  j["bias"] = bias_;
  j["platt"] = {platt_.a, platt_.b};
  j["probabilistic"] = probabilistic_;
  j["dual_coef"] = coef_;
  j["n_features"] = support_.cols();
  j["support_vectors"] = support_.data();
  return j;
}

SvmClassifier SvmClassifier::from_json(const nlohmann::json& j) {
  SvmClassifier m;
  const auto& k = j.at("kernel");
  m.kernel_ = {static_cast<KernelType>(k.at("type").get<int>()), k.at("degree").get<int>(),
               k.at("gamma").get<double>(), k.at("coef0").get<double>()};
  m.bias_ = j.at("bias").get<double>();
  m.platt_ = {j.at("platt").at(0).get<double>(), j.at("platt").at(1).get<double>()};
  m.probabilistic_ = j.at("probabilistic").get<bool>();
  m.coef_ = j.at("dual_coef").get<std::vector<double>>();
  const auto d = j.at("n_features").get<std::size_t>();
  const auto flat = j.at("support_vectors").get<std::vector<double>>();
  if (d == 0 || flat.size() != d * m.coef_.size()) throw std::invalid_argument("svm: bad support vectors");
  m.support_ = Matrix(m.coef_.size(), d);
  for (std::size_t i = 0; i < m.coef_.size(); ++i) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(i * d),
              flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * d), m.support_.row(i).begin());
  }
  return m;
}

}  // namespace igbot
