#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ginidep/estimators.hpp"
#include "ginidep/kernels.hpp"
#include "ginidep/random.hpp"
#include "ginidep/statistic.hpp"

namespace ginidep {

// Distribution families with their parameter hyperpriors:
//   normal:      mean ~ N(0, 5) (sd 5), sd ~ U(0, 5)
//   exponential: rate ~ U(0, 5)
//   gamma:       shape ~ U(0, 10), rate ~ U(0, 10)
enum class Family { normal, exponential, gamma };

std::string_view to_string(Family f) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

struct ComponentParams {
  Family family = Family::normal;
  double first = 0.0;   // normal mean | exponential rate | gamma shape
  double second = 0.0;  // normal sd   | unused           | gamma rate
};

ComponentParams draw_component(Family family, Rng& rng);
double sample_component(const ComponentParams& params, Rng& rng);

// p_k = u_k / sum u, u_k ~ U(0, 1), every component strictly positive.
std::vector<double> random_proportions(std::size_t classes, Rng& rng);
std::vector<double> proportions_from_weights(std::span<const double> weights);

// Largest-remainder rounding of n * p_k; leftover units go to the largest
// fractional parts, ties to the lower class index.
std::vector<std::size_t> allocate_counts(std::span<const double> proportions, std::size_t n);

enum class Hypothesis { h0, h1 };

struct GeneratedDataset {
  LabeledDataset data;                  // one feature named "x", labels 0..K-1
  std::vector<double> proportions;
  std::vector<ComponentParams> components;  // F0 under H0, F_1..F_K under H1
  std::size_t proportion_redraws = 0;
};

// H0: x iid from one random F0, labels allocated independently of x.
// H1: x from F_k for the n_k samples labelled k, each F_k drawn afresh.
// Class counts come from allocate_counts; proportions giving some n_k < 2 are
// redrawn.
GeneratedDataset generate_dataset(Family family, std::size_t classes, std::size_t n,
                                  Hypothesis hypothesis, Rng& rng);

struct PowerConfig {
  Family family = Family::normal;
  std::size_t classes = 3;
  std::size_t n = 100;
  std::size_t m = 10000;
  BoundedKernel kernel = BoundedKernel::weighted_gaussian();
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

struct StatisticPower {
  Statistic statistic = Statistic::gcov;
  double power = 0.0;
  double auc = 0.0;
  double critical_value = 0.0;  // ceil(m (1-alpha))-th smallest H0 value
};

struct PowerReport {
  PowerConfig config;
  std::vector<StatisticPower> per_statistic;

  const StatisticPower& at(Statistic s) const;
};

// Simulates m datasets under each hypothesis and summarizes how well each
// statistic separates them. Replicate r draws its H0 dataset from substream
// (seed, 2r) and its H1 dataset from (seed, 2r + 1).
PowerReport power_and_auc(const PowerConfig& config, std::span<const Statistic> statistics);

// Empirical ROC of "reject when value > threshold" swept over all thresholds,
// from (0,0) to (1,1). Tied values form a single diagonal step.
struct RocCurve {
  std::vector<double> fpr;
  std::vector<double> tpr;
};

RocCurve roc_curve(std::span<const double> h0, std::span<const double> h1);
// Pr[H1 value > H0 value] + Pr[tie] / 2.
double auc_rank(std::span<const double> h0, std::span<const double> h1);
double auc_trapezoid(const RocCurve& roc);
// TPR at FPR = alpha by linear interpolation along the curve.
double power_at(const RocCurve& roc, double alpha);
double upper_quantile(std::span<const double> h0, double alpha);

}  // namespace ginidep
