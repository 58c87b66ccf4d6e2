#include "ginidep/screening.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ginidep/csv.hpp"
#include "ginidep/error.hpp"
#include "ginidep/inference.hpp"
#include "ginidep/kernels.hpp"
#include "ginidep/parallel.hpp"
#include "ginidep/random.hpp"

namespace ginidep {
namespace {

constexpr std::uint64_t kSubsampleStream = 0x5ca1ab1e;

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

LabeledDataset select_rows(const LabeledDataset& data, const std::vector<std::size_t>& rows) {
  LabeledDataset out;
  out.feature_names = data.feature_names;
  out.label_names = data.label_names;
  out.features = Matrix(rows.size(), data.feature_count());
  out.labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = data.features.row(rows[r]);
    std::copy(src.begin(), src.end(), out.features.row(r).begin());
    out.labels.push_back(data.labels[rows[r]]);
  }
  return out;
}

}  // namespace

std::vector<bool> constant_features(const LabeledDataset& data) {
  std::vector<bool> out(data.feature_count(), true);
  for (std::size_t j = 0; j < data.feature_count(); ++j) {
    for (std::size_t i = 1; i < data.size(); ++i) {
      if (data.features(i, j) != data.features(0, j)) {
        out[j] = false;
        break;
      }
    }
  }
  return out;
}

Standardized standardize(const LabeledDataset& data) {
  if (data.size() == 0) {
    throw InsufficientData("cannot standardize an empty dataset");
  }
  Standardized out;
  out.data = data;
  out.constant = constant_features(data);
  const std::size_t n = data.size();
  const double nd = static_cast<double>(n);
  for (std::size_t j = 0; j < data.feature_count(); ++j) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < n; ++i) {
      sum.add(data.features(i, j));
    }
    const double mean = sum.value() / nd;
    CompensatedSum ss;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = data.features(i, j) - mean;
      ss.add(c * c);
    }
    const double sd = std::sqrt(ss.value() / nd);
    if (out.constant[j] || !(sd > 0.0)) {
      out.constant[j] = true;
      out.warnings.push_back("feature '" + data.feature_names[j] +
                             "' has zero variance and is excluded from ranking");
      for (std::size_t i = 0; i < n; ++i) {
        out.data.features(i, j) = 0.0;
      }
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      out.data.features(i, j) = (data.features(i, j) - mean) / sd;
    }
  }
  return out;
}

LabeledDataset subsample_rows(const LabeledDataset& data, std::size_t cap, std::uint64_t seed) {
  if (cap == 0) {
    throw InvalidInput("sample cap must be positive");
  }
  if (cap >= data.size()) {
    return data;
  }
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> chosen;
  chosen.reserve(cap);
  Rng rng = substream(seed, kSubsampleStream);
  std::sample(all.begin(), all.end(), std::back_inserter(chosen), cap, rng);
  return select_rows(data, chosen);
}

Ranking rank_features(const LabeledDataset& data, const RankingOptions& options) {
  if (!(options.sigma2 > 0.0) || !std::isfinite(options.sigma2)) {
    throw InvalidInput("sigma2 must be a positive finite number");
  }
  if (ClassPartition(data.labels).class_count() < 2) {
    throw InsufficientData("screening needs at least two distinct labels");
  }
  const std::size_t q = data.feature_count();
  const auto kernel = BoundedKernel::weighted_gaussian(options.sigma2);
  const auto constant = constant_features(data);

  std::vector<RankedFeature> features(q);
  std::vector<std::string> failures(q);
  parallel_for(q, [&](std::size_t j) {
    RankedFeature& f = features[j];
    f.name = data.feature_names[j];
    f.index = j;
    if (constant[j]) {
      failures[j] = "feature '" + f.name + "' is constant and is ranked last";
      return;
    }
    try {
      const std::vector<double> x = data.features.column_copy(j);
      const auto statistic = options.statistic == Statistic::eta2
                                 ? LabelStatistic(Statistic::eta2, x)
                                 : LabelStatistic(options.statistic, pairwise_matrix(kernel, x));
      if (options.permutations > 0) {
        const auto report = permutation_test(statistic, data.labels, options.permutations,
                                             options.alpha, options.seed);
        f.value = report.value;
        f.p_value = report.p_value;
      } else {
        f.value = statistic(data.labels);
      }
    } catch (const Error& e) {
      failures[j] = "feature '" + f.name + "' skipped: " + e.what();
      f.value.reset();
      f.p_value.reset();
    }
  });

  Ranking ranking;
  for (const auto& msg : failures) {
    if (!msg.empty()) {
      ranking.warnings.push_back(msg);
    }
  }
  std::stable_sort(features.begin(), features.end(),
                   [](const RankedFeature& a, const RankedFeature& b) {
                     if (a.value.has_value() != b.value.has_value()) {
                       return a.value.has_value();
                     }
                     if (a.value && *a.value != *b.value) {
                       return *a.value > *b.value;
                     }
                     return a.index < b.index;
                   });
  for (std::size_t r = 0; r < q; ++r) {
    features[r].rank = r + 1;
  }
  ranking.features = std::move(features);
  return ranking;
}

ScreeningResult screen(const ScreeningConfig& config) {
  if (!(config.sigma2 > 0.0) || !std::isfinite(config.sigma2)) {
    throw InvalidInput("sigma2 must be a positive finite number");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw InvalidInput("alpha must lie in (0, 1)");
  }
  if (config.sample_cap && *config.sample_cap == 0) {
    throw InvalidInput("sample cap must be positive");
  }
  ScreeningResult result;
  auto loaded = load_csv(config.input, config.label, {config.drop_small_classes});
  result.warnings = loaded.warnings;
  LabeledDataset data = std::move(loaded.data);
  if (config.top_k && *config.top_k > data.feature_count()) {
    throw InvalidInput("top-k = " + std::to_string(*config.top_k) + " exceeds the " +
                       std::to_string(data.feature_count()) + " available features");
  }
  if (config.sample_cap && *config.sample_cap < data.size()) {
    data = subsample_rows(data, *config.sample_cap, config.seed);
  }
  if (config.standardize) {
    auto s = standardize(data);
    data = std::move(s.data);
  }

  RankingOptions options;
  options.statistic = config.statistic;
  options.sigma2 = config.sigma2;
  options.permutations = config.permutations;
  options.alpha = config.alpha;
  options.seed = config.seed;
  result.ranking = rank_features(data, options);
  result.warnings.insert(result.warnings.end(), result.ranking.warnings.begin(),
                         result.ranking.warnings.end());

  const auto scored = static_cast<std::size_t>(
      std::count_if(result.ranking.features.begin(), result.ranking.features.end(),
                    [](const RankedFeature& f) { return f.value.has_value(); }));
  if (scored == 0) {
    throw InfeasibleConfiguration("no feature could be scored with " +
                                  std::string(to_string(config.statistic)));
  }
  std::size_t k = config.top_k.value_or(scored);
  if (k > scored) {
    result.warnings.push_back("only " + std::to_string(scored) + " features could be scored; " +
                              "selected fewer than top-k = " + std::to_string(k));
    k = scored;
  }
  for (std::size_t r = 0; r < k; ++r) {
    result.selected.push_back(result.ranking.features[r].name);
  }

  nlohmann::ordered_json report;
  report["version"] = kVersion;
  auto& cfg = report["config"];
  cfg["input"] = config.input.string();
  cfg["label"] = config.label;
  cfg["statistic"] = std::string(to_string(config.statistic));
  cfg["sigma2"] = config.sigma2;
  cfg["standardize"] = config.standardize;
  cfg["top_k"] = config.top_k ? nlohmann::ordered_json(*config.top_k) : nullptr;
  cfg["permutations"] = config.permutations;
  cfg["alpha"] = config.alpha;
  cfg["sample_cap"] = config.sample_cap ? nlohmann::ordered_json(*config.sample_cap) : nullptr;
  cfg["drop_small_classes"] = config.drop_small_classes;
  cfg["n"] = data.size();
  report["seed"] = config.seed;
  report["features"] = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "rank,feature,statistic,p_value\n";
  for (const auto& f : result.ranking.features) {
    nlohmann::ordered_json entry;
    entry["name"] = f.name;
    entry["value"] = f.value ? nlohmann::ordered_json(*f.value) : nullptr;
    entry["rank"] = f.rank;
    if (f.p_value) {
      entry["p_value"] = *f.p_value;
    }
    report["features"].push_back(std::move(entry));
    csv << f.rank << ',' << csv_escape(f.name) << ','
        << (f.value ? format_double(*f.value) : std::string()) << ','
        << (f.p_value ? format_double(*f.p_value) : std::string()) << '\n';
  }
  report["selected"] = result.selected;
  report["warnings"] = result.warnings;
  result.report_json = report.dump(2) + "\n";
  result.ranking_csv = csv.str();
  return result;
}

ScreeningResult run_screening(const ScreeningConfig& config) {
  ScreeningResult result = screen(config);
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) {
    throw InvalidInput("cannot create output directory '" + config.out_dir.string() +
                       "': " + ec.message());
  }
  auto write = [&](const std::string& name, const std::string& content) {
    const auto path = config.out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content) || !out.flush()) {
      throw InvalidInput("cannot write '" + path.string() + "'");
    }
  };
  write("ranking.csv", result.ranking_csv);
  write("report.json", result.report_json);
  return result;
}

}  // namespace ginidep
