#include "ginidep/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "ginidep/error.hpp"
#include "ginidep/parallel.hpp"
#include "ginidep/random.hpp"

namespace ginidep {
namespace {

void require_alpha(double alpha, bool allow_one) {
  const bool ok = alpha > 0.0 && (allow_one ? alpha <= 1.0 : alpha < 1.0);
  if (!ok) {
    throw InvalidInput("alpha must lie in (0, " + std::string(allow_one ? "1]" : "1)") +
                       ", got " + std::to_string(alpha));
  }
}

// Bounds that underflow are reported as the smallest positive double, which is
// still a valid upper bound.
constexpr double kSmallestBound = std::numeric_limits<double>::denorm_min();

double clamp_bound(double bound) noexcept { return std::clamp(bound, kSmallestBound, 1.0); }

Decision decide(double value, double threshold) noexcept {
  return value > threshold ? Decision::reject_h0 : Decision::retain_h0;
}

}  // namespace

std::string_view to_string(Decision d) noexcept {
  return d == Decision::reject_h0 ? "reject_H0" : "retain_H0";
}

double critical_value(double alpha, std::size_t n) {
  require_alpha(alpha, true);
  if (n == 0) {
    throw InvalidInput("critical_value: n must be at least 1");
  }
  return std::sqrt(12.5 * std::log(1.0 / alpha) / static_cast<double>(n));
}

TestReport critical_value_test(double gcov_value, double alpha, std::size_t n) {
  TestReport r;
  r.statistic_name = "gcov";
  r.value = gcov_value;
  r.threshold = critical_value(alpha, n);
  r.decision = decide(gcov_value, r.threshold);
  r.alpha = alpha;
  r.n = n;
  return r;
}

double deviation_bound(const BoundQuery& q, ErrorKind error_kind) {
  if (q.n == 0) {
    throw InvalidInput("deviation_bound: n must be at least 1");
  }
  if (!(q.c >= 0.0) || !std::isfinite(q.c)) {
    throw InvalidInput("deviation_bound: c must be nonnegative");
  }
  const double t_max = q.kind == BoundKind::gcor ? 0.25 : 0.5;
  if (!(q.t > 0.0 && q.t < t_max)) {
    throw InvalidInput("deviation_bound: t must lie in (0, " + std::to_string(t_max) + ")");
  }
  const double n = static_cast<double>(q.n);
  const double c2 = q.c * q.c;
  const double base = std::pow(n, 1.0 - 2.0 * q.t);
  double bound = 1.0;
  switch (q.kind) {
    case BoundKind::gcov:
      bound = std::exp(-c2 * base / 12.5);
      break;
    case BoundKind::delta:
      bound = std::exp(-c2 * base / 2.0);
      break;
    case BoundKind::dcov:
      bound = std::exp(-c2 * base / 512.0);
      break;
    case BoundKind::gcor:
      bound = error_kind == ErrorKind::type1
                  ? std::exp(-c2 * std::pow(n, 1.0 - 4.0 * q.t) / 12.5) + std::exp(-base / 2.0)
                  : std::exp(-c2 * base / 12.5);
      break;
  }
  return clamp_bound(bound);
}

double underperform_bound_uncapped(double gamma, std::size_t n) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("underperform_bound: gamma must be positive");
  }
  if (n == 0) {
    throw InvalidInput("underperform_bound: n must be at least 1");
  }
  const double e = static_cast<double>(n) * gamma * gamma;
  return std::max(std::exp(-e / 12.5) + std::exp(-e / 512.0), kSmallestBound);
}

double underperform_bound(double gamma, std::size_t n) {
  return clamp_bound(underperform_bound_uncapped(gamma, n));
}

std::size_t permutation_threshold_rank(std::size_t permutations, double alpha) {
  require_alpha(alpha, false);
  if (permutations < 1) {
    throw InvalidInput("permutation test needs at least one permutation");
  }
  // The 1e-9 absorbs representation error in products like 200 * 0.95.
  const double exact = static_cast<double>(permutations + 1) * (1.0 - alpha);
  const auto rank = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::clamp<std::size_t>(rank, 1, permutations);
}

TestReport permutation_test(const LabelStatistic& statistic, std::span<const int> labels,
                            std::size_t permutations, double alpha, std::uint64_t seed) {
  const std::size_t rank = permutation_threshold_rank(permutations, alpha);
  if (static_cast<double>(permutations + 1) * alpha < 1.0 - 1e-9) {
    throw InvalidInput("permutation test with B = " + std::to_string(permutations) +
                       " cannot reject at alpha = " + std::to_string(alpha) +
                       "; need (B + 1) * alpha >= 1");
  }
  const double observed = statistic(labels);
  std::vector<double> permuted(permutations);
  parallel_for(permutations, [&](std::size_t b) {
    Rng rng = substream(seed, b);
    std::vector<int> shuffled(labels.begin(), labels.end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    permuted[b] = statistic(shuffled);
  });
  const auto at_least =
      std::count_if(permuted.begin(), permuted.end(), [&](double v) { return v >= observed; });
  std::vector<double> sorted = permuted;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sorted.end());

  TestReport r;
  r.statistic_name = std::string(to_string(statistic.kind()));
  r.value = observed;
  r.threshold = sorted[rank - 1];
  r.p_value = (1.0 + static_cast<double>(at_least)) / (static_cast<double>(permutations) + 1.0);
  r.decision = decide(observed, r.threshold);
  r.alpha = alpha;
  r.n = labels.size();
  r.permutations = permutations;
  r.seed = seed;
  return r;
}

TestReport permutation_test(Statistic statistic, const DistanceMatrix& d,
                            std::span<const int> labels, std::size_t permutations, double alpha,
                            std::uint64_t seed) {
  if (d.size() != labels.size()) {
    throw InvalidInput("permutation_test: matrix and labels differ in length");
  }
  return permutation_test(LabelStatistic(statistic, d), labels, permutations, alpha, seed);
}

double sigma_v_squared_hat(const DistanceMatrix& d, std::span<const int> labels) {
  const auto g = gini_statistics(d, labels);
  const ClassPartition part(labels);
  const std::size_t n = d.size();
  const double nd = static_cast<double>(n);
  const double between = g.gcov - g.delta_hat;  // -sum_k phat_k Delta_hat_k
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = d.row(i);
    const std::size_t k = part.class_of(i);
    CompensatedSum all;
    CompensatedSum own;
    for (std::size_t j = 0; j < n; ++j) {
      all.add(row[j]);
      if (part.class_of(j) == k) {
        own.add(row[j]);
      }
    }
    const double nk = static_cast<double>(g.class_sizes[k]);
    const double g_all = all.value() / (nd - 1.0) - g.delta_hat;
    const double g_own = own.value() / (nk - 1.0) - g.delta_hat_k[k];
    const double psi = 2.0 * (g_all - g_own) - (g.delta_hat_k[k] + between);
    acc.add(psi * psi);
  }
  return acc.value() / nd;
}

ConfidenceInterval asymptotic_ci(const DistanceMatrix& d, std::span<const int> labels,
                                 double alpha) {
  require_alpha(alpha, false);
  ConfidenceInterval ci;
  const auto g = gini_statistics(d, labels);
  ci.warnings = g.warnings;
  if (d.size() < 20) {
    ci.warnings.push_back("n = " + std::to_string(d.size()) +
                          " is below 20; the normal approximation may be poor");
  }
  ci.estimate = g.gcov;
  ci.sigma_v_hat = std::sqrt(sigma_v_squared_hat(d, labels));
  const boost::math::normal_distribution<double> standard;
  const double z = boost::math::quantile(standard, 1.0 - alpha / 2.0);
  const double half = z * ci.sigma_v_hat / std::sqrt(static_cast<double>(d.size()));
  ci.lower = ci.estimate - half;
  ci.upper = ci.estimate + half;
  return ci;
}

}  // namespace ginidep
