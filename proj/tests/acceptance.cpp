// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ginidep/estimators.hpp"
#include "ginidep/inference.hpp"
#include "ginidep/oracle.hpp"
#include "ginidep/parallel.hpp"
#include "ginidep/screening.hpp"
#include "ginidep/simgen.hpp"
#include "test_util.hpp"

using namespace ginidep;

namespace {

const BoundedKernel kGauss = BoundedKernel::weighted_gaussian(10.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0 = none
  std::function<Outcome()> run;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

DiscreteJoint::Sample draw_feasible(const DiscreteJoint& j, std::size_t n, Rng& rng) {
  for (;;) {
    auto s = j.sample(n, rng);
    const ClassPartition p(s.labels);
    bool ok = p.class_count() == j.class_count();
    for (auto size : p.sizes()) ok = ok && size >= 2;
    if (ok) return s;
  }
}

Outcome lemma1_identity() {
  Rng rng(101);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t atoms = 1 + t % 8;
    const std::size_t k = 2 + t % 3;
    const auto j = random_joint(atoms, k, 1 + t % 3, rng);
    worst = std::max(worst, std::abs(population_dcov(j, kGauss, DcovForm::definition) -
                                     population_dcov(j, kGauss, DcovForm::lemma1)));
  }
  return {worst <= 1e-12, fmt("max |definition - lemma1| = %.3g over 100 joints (tol 1e-12)", worst)};
}

Outcome unbiasedness() {
  Rng rng(202);
  int worst_misses = 0;
  double worst_z = 0;
  for (int t = 0; t < 5; ++t) {
    const auto j = random_joint(3 + t, 2 + t % 2, 1, rng, 0.2);
    if (!rejection_guard_satisfied(j, 50)) {
      return {false, "joint violates the p_min * n >= 8 guard"};
    }
    const double g = population_gini(j, kGauss).gcov;
    const double d = population_dcov(j, kGauss, DcovForm::definition);
    const auto mg = mc_mean(Statistic::gcov, j, kGauss, 50, 10000, 1000 + t);
    const auto md = mc_mean(Statistic::dcov, j, kGauss, 50, 10000, 2000 + t);
    const double zg = std::abs(mg.mean - g) / mg.std_error;
    const double zd = std::abs(md.mean - d) / md.std_error;
    worst_z = std::max({worst_z, zg, zd});
    worst_misses += (zg > 3) + (zd > 3);
  }
  return {worst_misses == 0,
          fmt("gcov_n and dcov_n means on 5 joints, worst |mean - population| = %.2f SE (tol 3)",
              worst_z)};
}

Outcome inequality() {
  Rng rng(303);
  double min_gap = 1e300, worst_indep = 0, worst_balanced = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + t % 4;
    const auto j = random_joint(2 + t % 7, k, 1 + t % 2, rng);
    min_gap = std::min(min_gap, population_gini(j, kGauss).gcov -
                                    population_dcov(j, kGauss, DcovForm::definition));
    const auto ind = make_independent(j);
    worst_indep = std::max({worst_indep, std::abs(population_gini(ind, kGauss).gcov),
                            std::abs(population_dcov(ind, kGauss, DcovForm::definition))});
    const auto bal = make_balanced(j);
    worst_balanced =
        std::max(worst_balanced, std::abs(population_dcov(bal, kGauss, DcovForm::definition) -
                                          population_gini(bal, kGauss).gcov / k));
  }
  const bool ok = min_gap >= -1e-12 && worst_indep <= 1e-12 && worst_balanced <= 1e-12;
  return {ok, fmt("min(gCov - dCov) = %.3g, independent max |.| = %.3g, "
                  "balanced max |dCov - gCov/K| = %.3g",
                  min_gap, worst_indep, worst_balanced)};
}

Outcome bounded_differences() {
  Rng rng(404);
  const std::size_t n = 50;
  std::normal_distribution<double> g(0, 2);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> label(0, 2);
  int violations = 0, swaps = 0;
  double max_g = 0, max_d = 0, max_dc = 0;
  while (swaps < 1000) {
    std::vector<double> x(n);
    for (double& v : x) v = g(rng);
    const auto y = testutil::random_labels(n, 3, rng);
    auto x2 = x;
    auto y2 = y;
    const std::size_t i = pick(rng);
    x2[i] = g(rng);
    y2[i] = label(rng);
    const ClassPartition part(y2);
    const auto sizes = part.sizes();
    if (sizes.size() != 3 || *std::min_element(sizes.begin(), sizes.end()) < 2) continue;
    ++swaps;
    const auto d = pairwise_matrix(kGauss, x);
    const auto d2 = pairwise_matrix(kGauss, x2);
    const auto a = gini_statistics(d, y);
    const auto b = gini_statistics(d2, y2);
    const double dg = std::abs(a.gcov - b.gcov);
    const double dd = std::abs(a.delta_hat - b.delta_hat);
    const double dc =
        std::abs(dcov_n(d, label_distance_matrix(y)) - dcov_n(d2, label_distance_matrix(y2)));
    max_g = std::max(max_g, dg * n);
    max_d = std::max(max_d, dd * n);
    max_dc = std::max(max_dc, dc * n);
    violations += (dg > 5.0 / n + 1e-12) + (dd > 2.0 / n + 1e-12) + (dc > 32.0 / n + 1e-12);
  }
  return {violations == 0,
          fmt("%d violations over 1000 replacements; max n*|change|: gcov %.3f (5), "
              "delta %.3f (2), dcov %.3f (32)",
              violations, max_g, max_d, max_dc)};
}

Outcome closed_forms() {
  const double doubled = 2 * critical_value(0.01, 2000);
  Rng rng(505);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<double> x(1000);
  for (double& v : x) v = u(rng);
  const double fast = gmd_1d_fast(x);
  const double slow = gmd(pairwise_matrix(BoundedKernel::raw_euclidean(), x));
  const bool ok = std::abs(doubled - 0.3393) <= 1e-4 && std::abs(fast - slow) <= 1e-10;
  return {ok, fmt("2 cv(0.01, 2000) = %.6f (0.3393 +/- 1e-4); |fast - O(n^2) gmd| = %.3g at n = 1000",
                  doubled, std::abs(fast - slow))};
}

Outcome permutation_calibration() {
  const std::size_t trials = 2000;
  std::vector<char> rejected(trials, 0);
  parallel_for(trials, [&](std::size_t t) {
    Rng rng = substream(606, t);
    std::normal_distribution<double> g;
    std::vector<double> x(100);
    for (double& v : x) v = g(rng);
    const auto y = testutil::random_labels(100, 3, rng);
    const auto r = permutation_test(Statistic::gcov, pairwise_matrix(kGauss, x), y, 199, 0.05,
                                    derive_seed(607, t));
    rejected[t] = r.decision == Decision::reject_h0;
  });
  const double rate =
      std::accumulate(rejected.begin(), rejected.end(), 0.0) / static_cast<double>(trials);
  return {rate >= 0.03 && rate <= 0.07,
          fmt("rejection rate %.4f over 2000 independent trials (n = 100, B = 199; "
              "target [0.03, 0.07])",
              rate)};
}

Outcome table2() {
  const std::vector<Statistic> stats{Statistic::dcov, Statistic::gcov};
  int gcov_wins = 0;
  double k3_normal_power = 0, k3_normal_auc = 0, k5_exp_power = 0;
  std::string cells;
  for (std::size_t k : {3u, 4u, 5u}) {
    for (Family f : {Family::normal, Family::exponential, Family::gamma}) {
      PowerConfig c;
      c.family = f;
      c.classes = k;
      c.n = 100;
      c.m = 2000;
      c.seed = 700 + 10 * k + static_cast<std::uint64_t>(f);
      const auto r = power_and_auc(c, stats);
      const auto& g = r.at(Statistic::gcov);
      const auto& d = r.at(Statistic::dcov);
      gcov_wins += g.power >= d.power;
      if (k == 3 && f == Family::normal) {
        k3_normal_power = g.power;
        k3_normal_auc = g.auc;
      }
      if (k == 5 && f == Family::exponential) k5_exp_power = g.power;
      cells += fmt(" K%zu-%c %.3f/%.3f", k, std::string(to_string(f))[0], g.power, d.power);
    }
  }
  const bool ok = std::abs(k3_normal_power - 0.984) <= 0.03 &&
                  std::abs(k3_normal_auc - 0.995) <= 0.01 &&
                  std::abs(k5_exp_power - 0.839) <= 0.04 && gcov_wins >= 5;
  return {ok, fmt("K=3 normal gcov power %.3f (0.984 +/- 0.03), AUC %.3f (0.995 +/- 0.01); "
                  "K=5 exponential gcov power %.3f (0.839 +/- 0.04); gcov >= dcov in %d/9 cells;"
                  " gcov/dcov power:",
                  k3_normal_power, k3_normal_auc, k5_exp_power, gcov_wins) +
                  cells};
}

Outcome ci_coverage() {
  const auto joint = DiscreteJoint::create(
      Matrix::from_rows({{-2}, {-0.5}, {0.5}, {2}}), {0.4, 0.6},
      Matrix::from_rows({{0.5, 0.3, 0.15, 0.05}, {0.1, 0.2, 0.3, 0.4}}));
  const double truth = population_gini(joint, kGauss).gcov;
  const std::size_t reps = 1000;
  std::vector<char> covered(reps, 0);
  parallel_for(reps, [&](std::size_t r) {
    Rng rng = substream(808, r);
    const auto s = draw_feasible(joint, 500, rng);
    covered[r] = asymptotic_ci(pairwise_matrix(kGauss, s.points), s.labels, 0.05).contains(truth);
  });
  const double coverage =
      std::accumulate(covered.begin(), covered.end(), 0.0) / static_cast<double>(reps);
  Rng rng(809);
  const auto s = draw_feasible(make_independent(joint), 2000, rng);
  const double sv2 = sigma_v_squared_hat(pairwise_matrix(kGauss, s.points), s.labels);
  return {coverage >= 0.93 && coverage <= 0.97 && sv2 < 0.05,
          fmt("95%% CI coverage %.3f over 1000 replicates at n = 500 (target [0.93, 0.97]); "
              "independent sigma_v^2 = %.2e at n = 2000 (< 0.05)",
              coverage, sv2)};
}

// Rigid motion, row permutation, determinism and balanced-class ranking.
Outcome invariance_suite() {
  int violations = 0, checks = 0;
  Rng rng(909);
  for (int t = 0; t < 25; ++t) {
    const std::size_t q = 1 + t % 4, n = 40 + t;
    const auto pts = testutil::gaussian_points(n, q, rng, 1.5);
    const auto y = testutil::random_labels(n, 2 + t % 3, rng);
    const auto r = testutil::random_orthonormal(q, rng);
    const auto moved = testutil::rigid_motion(pts, r, std::vector<double>(q, 5.0 - t));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Matrix shuffled(n, q);
    std::vector<int> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < q; ++j) shuffled(i, j) = pts(order[i], j);
      ys[i] = y[order[i]];
    }
    const auto d = pairwise_matrix(kGauss, pts);
    const auto dm = pairwise_matrix(kGauss, moved);
    const auto dsh = pairwise_matrix(kGauss, shuffled);
    for (Statistic s : {Statistic::gcov, Statistic::gcor, Statistic::dcov, Statistic::dcor}) {
      const double base = LabelStatistic(s, d)(y);
      violations += std::abs(base - LabelStatistic(s, dm)(y)) > 1e-12;
      violations += std::abs(base - LabelStatistic(s, dsh)(ys)) > 1e-12;
      checks += 2;
    }
  }

  PowerConfig c;
  c.family = Family::gamma;
  c.n = 40;
  c.m = 100;
  c.seed = 910;
  const std::vector<Statistic> stats{Statistic::gcov, Statistic::dcor};
  set_thread_count(1);
  const auto a = power_and_auc(c, stats);
  set_thread_count(3);
  const auto b = power_and_auc(c, stats);
  set_thread_count(0);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    violations += a.per_statistic[i].power != b.per_statistic[i].power;
    violations += a.per_statistic[i].auc != b.per_statistic[i].auc;
    checks += 2;
  }

  for (int k = 2; k <= 5; ++k) {
    LabeledDataset data;
    const std::size_t n = 25 * k;
    data.labels = testutil::random_labels(n, k, rng);
    data.features = testutil::gaussian_points(n, 10, rng);
    for (std::size_t j = 0; j < 10; ++j) {
      data.feature_names.push_back("f" + std::to_string(j));
      for (std::size_t i = 0; i < n; ++i) data.features(i, j) += 0.15 * j * data.labels[i];
    }
    RankingOptions g, p;
    g.statistic = Statistic::gcov;
    p.statistic = Statistic::dcov_plugin;
    const auto rg = rank_features(data, g);
    const auto rp = rank_features(data, p);
    for (std::size_t i = 0; i < 10; ++i) {
      violations += rg.features[i].name != rp.features[i].name;
      ++checks;
    }
  }
  return {violations == 0, fmt("%d violations over %d invariance checks", violations, checks)};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "dCov definition vs class-sum form", 5, lemma1_identity},
      {2, "Unbiasedness", 120, unbiasedness},
      {3, "gCov >= dCov inequality", 0, inequality},
      {4, "Bounded differences", 0, bounded_differences},
      {5, "Closed forms", 0, closed_forms},
      {6, "Permutation Type I calibration", 600, permutation_calibration},
      {7, "Power and AUC study", 1800, table2},
      {8, "CI coverage", 0, ci_coverage},
  };
  int failed = 0;
  auto report = [&](int id, const char* name, bool pass, const std::string& detail, double secs,
                    double limit) {
    std::string timing = fmt("%.2f s", secs);
    if (limit > 0) timing += fmt(" (limit %.0f s)", limit);
    std::printf("%s criterion %d (%s): %s [%s]\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str(), timing.c_str());
    std::fflush(stdout);
    failed += !pass;
  };
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit_s == 0 || secs < c.time_limit_s;
    report(c.id, c.name, o.pass && in_time, o.detail, secs, c.time_limit_s);
  }
  const int prior_failures = failed;
  const auto start = std::chrono::steady_clock::now();
  Outcome inv;
  try {
    inv = invariance_suite();
  } catch (const std::exception& e) {
    inv = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(9, "Invariance suite", inv.pass && prior_failures == 0,
         inv.detail + fmt("; criteria 1-8 failures: %d", prior_failures), secs, 0);
  return failed == 0 ? 0 : 1;
}
