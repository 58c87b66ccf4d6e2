#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ginidep/kernels.hpp"
#include "ginidep/statistic.hpp"

namespace ginidep {

enum class Decision { reject_h0, retain_h0 };
std::string_view to_string(Decision d) noexcept;

struct TestReport {
  std::string statistic_name;
  double value = 0.0;
  double threshold = 0.0;             // critical value or permutation quantile
  std::optional<double> p_value;
  Decision decision = Decision::retain_h0;  // reject iff value > threshold
  double alpha = 0.05;
  std::size_t n = 0;
  std::optional<std::size_t> permutations;
  std::uint64_t seed = 0;
};

// Distribution-free critical value sqrt(12.5 log(1/alpha) / n) for gcov_n
// under a kernel with distances in [0, 1).
double critical_value(double alpha, std::size_t n);

// Rejects H0 when gcov_value exceeds critical_value(alpha, n).
TestReport critical_value_test(double gcov_value, double alpha, std::size_t n);

enum class BoundKind { gcov, delta, dcov, gcor };
enum class ErrorKind { type1, type2 };

// Rejection threshold c * n^-t for the bound-based tests.
struct BoundQuery {
  BoundKind kind = BoundKind::gcov;
  double c = 1.0;
  double t = 0.25;
  std::size_t n = 1;
};

// McDiarmid-type error bounds for the test "reject when statistic >= c n^-t".
// gcov, delta and dcov use exp(-c^2 n^{1-2t} / C) with C = 12.5, 2, 512. The
// gcor Type I bound is exp(-c^2 n^{1-4t} / 12.5) + exp(-n^{1-2t} / 2) and
// requires t < 1/4. Results are capped at 1 and floored at the smallest
// positive double.
double deviation_bound(const BoundQuery& query, ErrorKind error_kind);

// Probability bound that gcov_n misses a dependence that dcov_n detects:
// exp(-n gamma^2 / 12.5) + exp(-n gamma^2 / 512), with the reported value
// capped at the trivial bound 1.
double underperform_bound(double gamma, std::size_t n);
double underperform_bound_uncapped(double gamma, std::size_t n);

// Shuffles the labels (equivalently the feature rows) B times and compares
// the observed statistic against the permutation distribution. The threshold
// is the ceil((B+1)(1-alpha))-th smallest permuted value and the p-value is
// (1 + #{permuted >= observed}) / (B + 1); permutation b uses substream
// (seed, b).
TestReport permutation_test(const LabelStatistic& statistic, std::span<const int> labels,
                            std::size_t permutations, double alpha, std::uint64_t seed);
TestReport permutation_test(Statistic statistic, const DistanceMatrix& d,
                            std::span<const int> labels, std::size_t permutations, double alpha,
                            std::uint64_t seed);

// 1-based rank of the permutation order statistic used as threshold.
std::size_t permutation_threshold_rank(std::size_t permutations, double alpha);

struct ConfidenceInterval {
  double estimate = 0.0;  // gcov_n
  double lower = 0.0;
  double upper = 0.0;
  double sigma_v_hat = 0.0;  // estimated asymptotic sd of sqrt(n) (gcov_n - gCov)
  std::vector<std::string> warnings;

  bool contains(double value) const noexcept { return lower <= value && value <= upper; }
};

// Plug-in estimate of the asymptotic variance of sqrt(n) gcov_n: the mean
// square of the estimated influence
//   2 (g(x_i) - g_{y_i}(x_i)) - (Delta_{y_i} - sum_k phat_k Delta_k),
// where g(x) is the mean distance from x to the sample minus Delta_hat and
// g_k(x) the mean distance from x to class k minus Delta_hat_k.
double sigma_v_squared_hat(const DistanceMatrix& d, std::span<const int> labels);

// gcov_n -/+ z_{1-alpha/2} sigma_v_hat / sqrt(n).
ConfidenceInterval asymptotic_ci(const DistanceMatrix& d, std::span<const int> labels,
                                 double alpha);

}  // namespace ginidep
