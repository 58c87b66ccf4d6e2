#include "ginidep/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ginidep/error.hpp"
#include "ginidep/parallel.hpp"

namespace ginidep {
namespace {

// Draws from U(0, hi) excluding 0, so scale and rate parameters are valid.
double positive_uniform(double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, hi);
  double v = 0.0;
  while (v == 0.0) {
    v = u(rng);
  }
  return v;
}

constexpr std::size_t kMaxProportionDraws = 100000;

}  // namespace

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::normal: return "normal";
    case Family::exponential: return "exponential";
    case Family::gamma: return "gamma";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (Family f : {Family::normal, Family::exponential, Family::gamma}) {
    if (to_string(f) == name) {
      return f;
    }
  }
  return std::nullopt;
}

ComponentParams draw_component(Family family, Rng& rng) {
  ComponentParams p;
  p.family = family;
  switch (family) {
    case Family::normal:
      p.first = std::normal_distribution<double>(0.0, 5.0)(rng);
      p.second = positive_uniform(5.0, rng);
      break;
    case Family::exponential:
      p.first = positive_uniform(5.0, rng);
      break;
    case Family::gamma:
      p.first = positive_uniform(10.0, rng);
      p.second = positive_uniform(10.0, rng);
      break;
  }
  return p;
}

double sample_component(const ComponentParams& params, Rng& rng) {
  switch (params.family) {
    case Family::normal:
      return std::normal_distribution<double>(params.first, params.second)(rng);
    case Family::exponential:
      return std::exponential_distribution<double>(params.first)(rng);
    case Family::gamma:
      // std::gamma_distribution takes a scale, the hyperprior draws a rate.
      return std::gamma_distribution<double>(params.first, 1.0 / params.second)(rng);
  }
  return 0.0;
}

std::vector<double> random_proportions(std::size_t classes, Rng& rng) {
  if (classes < 2) {
    throw InvalidInput("random_proportions needs at least 2 classes");
  }
  std::vector<double> u(classes);
  for (double& v : u) {
    v = positive_uniform(1.0, rng);
  }
  return proportions_from_weights(u);
}

std::vector<double> proportions_from_weights(std::span<const double> weights) {
  if (weights.empty() ||
      std::any_of(weights.begin(), weights.end(), [](double w) { return !(w > 0.0); })) {
    throw InvalidInput("proportion weights must be positive");
  }
  const double total = compensated_sum(weights);
  std::vector<double> p(weights.begin(), weights.end());
  for (double& v : p) {
    v /= total;
  }
  return p;
}

std::vector<std::size_t> allocate_counts(std::span<const double> proportions, std::size_t n) {
  const std::size_t k = proportions.size();
  std::vector<std::size_t> counts(k);
  std::vector<double> remainder(k);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = proportions[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < n; ++i) {
    ++counts[order[i % k]];
    ++assigned;
  }
  return counts;
}

GeneratedDataset generate_dataset(Family family, std::size_t classes, std::size_t n,
                                  Hypothesis hypothesis, Rng& rng) {
  if (classes < 2) {
    throw InvalidInput("generate_dataset needs at least 2 classes");
  }
  if (n < 2 * classes) {
    throw InvalidInput("generate_dataset: n = " + std::to_string(n) + " is too small for " +
                       std::to_string(classes) + " classes with 2 samples each");
  }
  GeneratedDataset out;
  std::vector<std::size_t> counts;
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt == kMaxProportionDraws) {
      throw InfeasibleConfiguration("could not draw proportions with every n_k >= 2");
    }
    out.proportions = random_proportions(classes, rng);
    counts = allocate_counts(out.proportions, n);
    if (std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c >= 2; })) {
      break;
    }
    ++out.proportion_redraws;
  }

  std::vector<double> x;
  std::vector<int> labels;
  x.reserve(n);
  labels.reserve(n);
  if (hypothesis == Hypothesis::h0) {
    out.components.push_back(draw_component(family, rng));
    for (std::size_t k = 0; k < classes; ++k) {
      for (std::size_t i = 0; i < counts[k]; ++i) {
        x.push_back(sample_component(out.components.front(), rng));
        labels.push_back(static_cast<int>(k));
      }
    }
  } else {
    for (std::size_t k = 0; k < classes; ++k) {
      out.components.push_back(draw_component(family, rng));
      for (std::size_t i = 0; i < counts[k]; ++i) {
        x.push_back(sample_component(out.components.back(), rng));
        labels.push_back(static_cast<int>(k));
      }
    }
  }

  out.data.feature_names = {"x"};
  out.data.features = Matrix::column(x);
  out.data.labels = std::move(labels);
  for (std::size_t k = 0; k < classes; ++k) {
    out.data.label_names.push_back("L" + std::to_string(k + 1));
  }
  return out;
}

const StatisticPower& PowerReport::at(Statistic s) const {
  for (const auto& p : per_statistic) {
    if (p.statistic == s) {
      return p;
    }
  }
  throw InvalidInput("statistic not present in power report");
}

namespace {

std::vector<double> evaluate_all(const LabeledDataset& data, const BoundedKernel& kernel,
                                 std::span<const Statistic> statistics) {
  const std::vector<double> x = data.features.column_copy(0);
  std::optional<DistanceMatrix> d;
  std::vector<double> out;
  out.reserve(statistics.size());
  for (Statistic s : statistics) {
    if (s == Statistic::eta2) {
      out.push_back(eta2(x, data.labels));
      continue;
    }
    if (!d) {
      d = pairwise_matrix(kernel, x);
    }
    out.push_back(LabelStatistic(s, *d)(data.labels));
  }
  return out;
}

}  // namespace

PowerReport power_and_auc(const PowerConfig& config, std::span<const Statistic> statistics) {
  if (config.m < 100) {
    throw InvalidInput("power_and_auc: m must be at least 100");
  }
  if (config.n < 2 * config.classes) {
    throw InvalidInput("power_and_auc: n must be at least 2K");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw InvalidInput("power_and_auc: alpha must lie in (0, 1)");
  }
  const std::size_t s_count = statistics.size();
  std::vector<std::vector<double>> h0(s_count, std::vector<double>(config.m));
  std::vector<std::vector<double>> h1(s_count, std::vector<double>(config.m));
  parallel_for(config.m, [&](std::size_t r) {
    Rng rng0 = substream(config.seed, 2 * r);
    Rng rng1 = substream(config.seed, 2 * r + 1);
    const auto null_set =
        generate_dataset(config.family, config.classes, config.n, Hypothesis::h0, rng0);
    const auto alt_set =
        generate_dataset(config.family, config.classes, config.n, Hypothesis::h1, rng1);
    const auto v0 = evaluate_all(null_set.data, config.kernel, statistics);
    const auto v1 = evaluate_all(alt_set.data, config.kernel, statistics);
    for (std::size_t s = 0; s < s_count; ++s) {
      h0[s][r] = v0[s];
      h1[s][r] = v1[s];
    }
  });

  PowerReport report;
  report.config = config;
  for (std::size_t s = 0; s < s_count; ++s) {
    const RocCurve roc = roc_curve(h0[s], h1[s]);
    StatisticPower p;
    p.statistic = statistics[s];
    p.power = power_at(roc, config.alpha);
    p.auc = auc_rank(h0[s], h1[s]);
    p.critical_value = upper_quantile(h0[s], config.alpha);
    report.per_statistic.push_back(p);
  }
  return report;
}

RocCurve roc_curve(std::span<const double> h0, std::span<const double> h1) {
  if (h0.empty() || h1.empty()) {
    throw InvalidInput("roc_curve needs values under both hypotheses");
  }
  std::vector<double> a(h0.begin(), h0.end());
  std::vector<double> b(h1.begin(), h1.end());
  std::sort(a.begin(), a.end(), std::greater<>());
  std::sort(b.begin(), b.end(), std::greater<>());
  const double m0 = static_cast<double>(a.size());
  const double m1 = static_cast<double>(b.size());
  RocCurve roc;
  roc.fpr.push_back(0.0);
  roc.tpr.push_back(0.0);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (i == a.size()) {
      v = b[j];
    } else if (j == b.size()) {
      v = a[i];
    } else {
      v = std::max(a[i], b[j]);
    }
    while (i < a.size() && a[i] == v) {
      ++i;
    }
    while (j < b.size() && b[j] == v) {
      ++j;
    }
    roc.fpr.push_back(static_cast<double>(i) / m0);
    roc.tpr.push_back(static_cast<double>(j) / m1);
  }
  return roc;
}

double auc_rank(std::span<const double> h0, std::span<const double> h1) {
  if (h0.empty() || h1.empty()) {
    throw InvalidInput("auc_rank needs values under both hypotheses");
  }
  struct Item {
    double value;
    bool alt;
  };
  std::vector<Item> all;
  all.reserve(h0.size() + h1.size());
  for (double v : h0) all.push_back({v, false});
  for (double v : h1) all.push_back({v, true});
  std::sort(all.begin(), all.end(), [](const Item& x, const Item& y) { return x.value < y.value; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::size_t alt_in_block = 0;
    while (j < all.size() && all[j].value == all[i].value) {
      alt_in_block += all[j].alt ? 1 : 0;
      ++j;
    }
    // midrank of 1-based ranks i+1..j
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    rank_sum += midrank * static_cast<double>(alt_in_block);
    i = j;
  }
  const double n1 = static_cast<double>(h1.size());
  const double n0 = static_cast<double>(h0.size());
  return (rank_sum - n1 * (n1 + 1.0) / 2.0) / (n0 * n1);
}

double auc_trapezoid(const RocCurve& roc) {
  CompensatedSum area;
  for (std::size_t i = 1; i < roc.fpr.size(); ++i) {
    area.add((roc.fpr[i] - roc.fpr[i - 1]) * (roc.tpr[i] + roc.tpr[i - 1]) / 2.0);
  }
  return area.value();
}

double power_at(const RocCurve& roc, double alpha) {
  constexpr double tol = 1e-12;
  std::size_t last = 0;
  for (std::size_t i = 0; i < roc.fpr.size(); ++i) {
    if (roc.fpr[i] <= alpha + tol) {
      last = i;
    }
  }
  if (std::abs(roc.fpr[last] - alpha) <= tol || last + 1 == roc.fpr.size()) {
    return roc.tpr[last];
  }
  const double f0 = roc.fpr[last];
  const double f1 = roc.fpr[last + 1];
  const double w = (alpha - f0) / (f1 - f0);
  return roc.tpr[last] + w * (roc.tpr[last + 1] - roc.tpr[last]);
}

double upper_quantile(std::span<const double> h0, double alpha) {
  if (h0.empty()) {
    throw InvalidInput("upper_quantile of an empty sample");
  }
  std::vector<double> sorted(h0.begin(), h0.end());
  std::sort(sorted.begin(), sorted.end());
  const double exact = static_cast<double>(sorted.size()) * (1.0 - alpha);
  auto rank = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

}  // namespace ginidep
