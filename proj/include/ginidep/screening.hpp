#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ginidep/estimators.hpp"
#include "ginidep/statistic.hpp"

namespace ginidep {

inline constexpr const char* kVersion = "0.1.0";

struct Standardized {
  LabeledDataset data;
  std::vector<bool> constant;  // per feature; constant columns are only centered
  std::vector<std::string> warnings;
};

// Per-feature (x - mean) / sd with the divisor-n standard deviation.
Standardized standardize(const LabeledDataset& data);

// Indices of features whose values are all identical.
std::vector<bool> constant_features(const LabeledDataset& data);

// Uniform subsample of `cap` rows without replacement, original order kept.
LabeledDataset subsample_rows(const LabeledDataset& data, std::size_t cap, std::uint64_t seed);

struct RankingOptions {
  Statistic statistic = Statistic::gcor;
  double sigma2 = kDefaultSigma2;
  std::size_t permutations = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

struct RankedFeature {
  std::string name;
  std::size_t index = 0;       // column position among the features
  std::optional<double> value; // empty when the feature was excluded or failed
  std::size_t rank = 0;        // 1-based
  std::optional<double> p_value;
};

struct Ranking {
  std::vector<RankedFeature> features;  // ordered by rank
  std::vector<std::string> warnings;
};

// Scores every feature as a 1-D sample against the labels and sorts them by
// descending value, ties by ascending column index. Constant features and
// features whose statistic fails are ranked last in column order. With
// permutations > 0 every feature is tested with the same permutation seed.
Ranking rank_features(const LabeledDataset& data, const RankingOptions& options);

struct ScreeningConfig {
  std::filesystem::path input;
  std::string label = "label";
  Statistic statistic = Statistic::gcor;
  double sigma2 = kDefaultSigma2;
  bool standardize = true;
  std::optional<std::size_t> top_k;  // all ranked features when empty
  std::size_t permutations = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::optional<std::size_t> sample_cap;
  bool drop_small_classes = false;
  std::filesystem::path out_dir = ".";
};

struct ScreeningResult {
  Ranking ranking;
  std::vector<std::string> selected;
  std::vector<std::string> warnings;
  std::string report_json;
  std::string ranking_csv;
};

// Runs load, optional subsampling, optional standardization and ranking
// without touching the file system beyond reading the input.
ScreeningResult screen(const ScreeningConfig& config);

// screen() followed by writing ranking.csv and report.json into out_dir.
ScreeningResult run_screening(const ScreeningConfig& config);

}  // namespace ginidep
