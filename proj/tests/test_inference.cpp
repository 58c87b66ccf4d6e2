#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ginidep/error.hpp"
#include "ginidep/estimators.hpp"
#include "ginidep/inference.hpp"
#include "ginidep/oracle.hpp"
#include "ginidep/parallel.hpp"
#include "test_util.hpp"

using namespace ginidep;

namespace {

const BoundedKernel kGauss = BoundedKernel::weighted_gaussian();

DiscreteJoint dependent_joint() {
  return DiscreteJoint::create(Matrix::from_rows({{-2}, {-0.5}, {0.5}, {2}}), {0.4, 0.6},
                               Matrix::from_rows({{0.5, 0.3, 0.15, 0.05}, {0.1, 0.2, 0.3, 0.4}}));
}

DiscreteJoint two_atom_point_mass() {
  return DiscreteJoint::create(Matrix::from_rows({{0}, {1}}), {0.5, 0.5},
                               Matrix::from_rows({{1, 0}, {0, 1}}));
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

}  // namespace

TEST(CriticalValue, ClosedForms) {
  EXPECT_EQ(critical_value(1.0, 37), 0.0);
  EXPECT_NEAR(critical_value(0.01, 2000), 0.16965, 5e-6);
  EXPECT_NEAR(2 * critical_value(0.01, 2000), 0.3393, 1e-4);
  EXPECT_NEAR(critical_value(0.05, 2000), 0.13683, 5e-6);
  EXPECT_NEAR(critical_value(0.05, 2000), std::sqrt(12.5 * std::log(20.0) / 2000), 1e-16);
}

TEST(CriticalValue, MonotoneAndValidated) {
  EXPECT_GT(critical_value(0.01, 100), critical_value(0.05, 100));
  EXPECT_GT(critical_value(0.05, 100), critical_value(0.05, 200));
  EXPECT_THROW(critical_value(0.0, 10), InvalidInput);
  EXPECT_THROW(critical_value(1.5, 10), InvalidInput);
  EXPECT_THROW(critical_value(-0.1, 10), InvalidInput);
  EXPECT_THROW(critical_value(0.05, 0), InvalidInput);
}

TEST(CriticalValueTest, StrictRejection) {
  const double cv = critical_value(0.05, 100);
  EXPECT_EQ(critical_value_test(cv, 0.05, 100).decision, Decision::retain_h0);
  EXPECT_EQ(critical_value_test(std::nextafter(cv, 1.0), 0.05, 100).decision,
            Decision::reject_h0);
  const auto r = critical_value_test(0.1, 0.05, 100);
  EXPECT_FALSE(r.p_value.has_value());
  EXPECT_FALSE(r.permutations.has_value());
  EXPECT_EQ(r.threshold, cv);
}

TEST(DeviationBound, VacuousAtZeroC) {
  for (auto kind : {BoundKind::gcov, BoundKind::delta, BoundKind::dcov}) {
    EXPECT_EQ(deviation_bound({kind, 0.0, 0.3, 100}, ErrorKind::type1), 1.0);
  }
  EXPECT_EQ(deviation_bound({BoundKind::gcor, 0.0, 0.2, 100}, ErrorKind::type1), 1.0);
}

TEST(DeviationBound, GcovTighterThanDcov) {
  const double g = deviation_bound({BoundKind::gcov, 1.0, 0.25, 100}, ErrorKind::type1);
  const double d = deviation_bound({BoundKind::dcov, 1.0, 0.25, 100}, ErrorKind::type1);
  EXPECT_NEAR(g, std::exp(-10.0 / 12.5), 1e-15);
  EXPECT_NEAR(g, 0.4493, 5e-5);
  EXPECT_NEAR(d, std::exp(-10.0 / 512.0), 1e-15);
  EXPECT_NEAR(d, 0.9807, 5e-5);
  EXPECT_LT(g, d);
  EXPECT_NEAR(deviation_bound({BoundKind::delta, 1.0, 0.25, 100}, ErrorKind::type2),
              std::exp(-5.0), 1e-15);
}

TEST(DeviationBound, GcorTypeOneHasExtraTerm) {
  const BoundQuery q{BoundKind::gcor, 2.0, 0.2, 10000};
  const double expected = std::exp(-4.0 * std::pow(10000.0, 0.2) / 12.5) +
                          std::exp(-std::pow(10000.0, 0.6) / 2.0);
  EXPECT_NEAR(deviation_bound(q, ErrorKind::type1), expected, 1e-15);
  EXPECT_NEAR(deviation_bound(q, ErrorKind::type2),
              std::exp(-4.0 * std::pow(10000.0, 0.6) / 12.5), 1e-15);
}

TEST(DeviationBound, RangeChecks) {
  EXPECT_THROW(deviation_bound({BoundKind::gcov, 1.0, 0.5, 10}, ErrorKind::type1), InvalidInput);
  EXPECT_THROW(deviation_bound({BoundKind::gcov, 1.0, 0.0, 10}, ErrorKind::type1), InvalidInput);
  EXPECT_THROW(deviation_bound({BoundKind::gcor, 1.0, 0.25, 10}, ErrorKind::type1), InvalidInput);
  EXPECT_THROW(deviation_bound({BoundKind::dcov, -1.0, 0.2, 10}, ErrorKind::type1), InvalidInput);
  EXPECT_THROW(deviation_bound({BoundKind::dcov, 1.0, 0.2, 0}, ErrorKind::type1), InvalidInput);
}

// Property: bounds decrease with n and gcov never exceeds dcov.
TEST(DeviationBound, MonotoneAndOrdered) {
  for (double c : {0.1, 0.5, 1.0, 3.0}) {
    for (double t : {0.05, 0.2, 0.3, 0.45}) {
      double prev_g = 2.0, prev_d = 2.0;
      for (std::size_t n : {10u, 100u, 1000u, 10000u}) {
        const double g = deviation_bound({BoundKind::gcov, c, t, n}, ErrorKind::type1);
        const double d = deviation_bound({BoundKind::dcov, c, t, n}, ErrorKind::type1);
        EXPECT_LE(g, d);
        EXPECT_LE(g, prev_g);
        EXPECT_LE(d, prev_d);
        EXPECT_GT(g, 0.0);
        prev_g = g;
        prev_d = d;
      }
    }
  }
}

TEST(DeviationBound, DominatesEmpiricalTypeOneRate) {
  const auto j = make_independent(dependent_joint());
  const std::size_t n = 100, reps = 400;
  std::vector<double> values(reps);
  Rng rng(31);
  for (auto& v : values) {
    const auto s = draw_feasible(j, n, rng);
    v = gcov_n(pairwise_matrix(kGauss, s.points), s.labels);
  }
  for (double c : {0.05, 0.2, 0.5, 1.0}) {
    for (double t : {0.1, 0.25, 0.4}) {
      const double threshold = c * std::pow(static_cast<double>(n), -t);
      double rate = 0;
      for (double v : values) rate += v >= threshold;
      rate /= reps;
      EXPECT_LE(rate, deviation_bound({BoundKind::gcov, c, t, n}, ErrorKind::type1))
          << "c=" << c << " t=" << t;
    }
  }
}

TEST(UnderperformBound, ClosedForms) {
  EXPECT_NEAR(underperform_bound(0.2, 1000), std::exp(-3.2) + std::exp(-0.078125), 1e-15);
  EXPECT_NEAR(underperform_bound(0.2, 1000), 0.96561, 5e-6);
  EXPECT_NEAR(underperform_bound_uncapped(1e-9, 10), 2.0, 1e-12);
  EXPECT_EQ(underperform_bound(1e-9, 10), 1.0);
  EXPECT_THROW(underperform_bound(0.0, 10), InvalidInput);
  EXPECT_THROW(underperform_bound(-0.1, 10), InvalidInput);
  EXPECT_GT(underperform_bound(0.2, 1000), underperform_bound(0.2, 5000));
  EXPECT_GT(underperform_bound(0.2, 1000), underperform_bound(0.3, 1000));
}

TEST(UnderperformBound, DominatesEmpiricalFrequency) {
  const auto j = dependent_joint();
  const double gcov = population_gini(j, kGauss).gcov;
  const double dcov = population_dcov(j, kGauss, DcovForm::definition);
  const double gamma = (gcov - dcov) / 2;
  ASSERT_GT(gamma, 0.0);
  const std::size_t n = 200, reps = 300;
  Rng rng(32);
  int under_u = 0, under_plugin = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto s = draw_feasible(j, n, rng);
    const auto d = pairwise_matrix(kGauss, s.points);
    const double g = gcov_n(d, s.labels);
    const double tau = dcov;
    under_u += g < tau && tau <= dcov_n(d, label_distance_matrix(s.labels));
    under_plugin += g < tau && tau <= dcov_plugin(d, s.labels);
  }
  const double bound = underperform_bound(gamma, n);
  EXPECT_LE(under_u / static_cast<double>(reps), bound);
  EXPECT_LE(under_plugin / static_cast<double>(reps), bound);
}

TEST(PermutationThresholdRank, Values) {
  EXPECT_EQ(permutation_threshold_rank(999, 0.05), 950u);
  EXPECT_EQ(permutation_threshold_rank(199, 0.05), 190u);
  EXPECT_EQ(permutation_threshold_rank(99, 0.05), 95u);
  EXPECT_EQ(permutation_threshold_rank(19, 0.05), 19u);
  EXPECT_EQ(permutation_threshold_rank(50, 0.05), 49u);
  EXPECT_THROW(permutation_threshold_rank(0, 0.05), InvalidInput);
}

TEST(PermutationTest, SeparatedClassesReject) {
  std::vector<double> x;
  std::vector<int> y;
  for (int i = 0; i < 100; ++i) {
    x.push_back(i < 50 ? 0.01 * i : 10 + 0.01 * i);
    y.push_back(i < 50 ? 0 : 1);
  }
  const auto d = pairwise_matrix(kGauss, x);
  const auto r = permutation_test(Statistic::gcov, d, y, 999, 0.05, 123);
  EXPECT_EQ(r.decision, Decision::reject_h0);
  ASSERT_TRUE(r.p_value.has_value());
  EXPECT_DOUBLE_EQ(*r.p_value, 1.0 / 1000.0);
  EXPECT_EQ(r.permutations, 999u);
  EXPECT_EQ(r.statistic_name, "gcov");
}

TEST(PermutationTest, SingleLabelRetains) {
  Rng rng(33);
  const auto pts = testutil::gaussian_points(20, 1, rng);
  const std::vector<int> y(20, 1);
  const auto r = permutation_test(Statistic::gcov, pairwise_matrix(kGauss, pts), y, 99, 0.05, 1);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.threshold, 0.0);
  EXPECT_EQ(r.decision, Decision::retain_h0);
  EXPECT_DOUBLE_EQ(*r.p_value, 1.0);
}

TEST(PermutationTest, Errors) {
  Rng rng(34);
  const auto pts = testutil::gaussian_points(20, 1, rng);
  const auto y = testutil::random_labels(20, 2, rng);
  const auto d = pairwise_matrix(kGauss, pts);
  EXPECT_THROW(permutation_test(Statistic::gcov, d, y, 0, 0.05, 1), InvalidInput);
  EXPECT_THROW(permutation_test(Statistic::gcov, d, y, 10, 0.05, 1), InvalidInput);
  EXPECT_THROW(permutation_test(Statistic::gcov, d, y, 99, 1.0, 1), InvalidInput);
  const std::vector<int> short_labels(19, 0);
  EXPECT_THROW(permutation_test(Statistic::gcov, d, short_labels, 99, 0.05, 1), InvalidInput);
  std::vector<int> tiny = y;
  tiny[0] = 9;
  EXPECT_THROW(permutation_test(Statistic::gcov, d, tiny, 99, 0.05, 1), ClassTooSmall);
}

TEST(PermutationTest, DeterministicAcrossThreadCounts) {
  Rng rng(35);
  const auto pts = testutil::gaussian_points(60, 2, rng);
  const auto y = testutil::random_labels(60, 3, rng);
  const auto d = pairwise_matrix(kGauss, pts);
  for (Statistic s : {Statistic::gcov, Statistic::gcor, Statistic::dcov, Statistic::dcor}) {
    set_thread_count(1);
    const auto a = permutation_test(s, d, y, 199, 0.05, 77);
    set_thread_count(4);
    const auto b = permutation_test(s, d, y, 199, 0.05, 77);
    set_thread_count(0);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.threshold, b.threshold);
    EXPECT_EQ(*a.p_value, *b.p_value);
  }
}

// Property: p-values are super-uniform under independence and agree with the
// decision rule.
TEST(PermutationTest, SuperUniformPValues) {
  const auto j = make_independent(dependent_joint());
  const std::size_t trials = 2000;
  int le01 = 0, le05 = 0, le10 = 0;
  Rng rng(36);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto s = draw_feasible(j, 40, rng);
    const auto r =
        permutation_test(Statistic::gcov, pairwise_matrix(kGauss, s.points), s.labels, 99, 0.05, t);
    const double p = *r.p_value;
    EXPECT_GE(p, 1.0 / 100.0);
    EXPECT_LE(p, 1.0);
    if (r.decision == Decision::reject_h0) EXPECT_LE(p, 0.05);
    le01 += p <= 0.01;
    le05 += p <= 0.05;
    le10 += p <= 0.10;
  }
  EXPECT_LE(le01 / double(trials), 0.01 + 0.02);
  EXPECT_LE(le05 / double(trials), 0.05 + 0.02);
  EXPECT_LE(le10 / double(trials), 0.10 + 0.02);
}

// Property: the distribution-free test keeps its level.
TEST(CriticalValueTest, HonorsLevelUnderIndependence) {
  Rng rng(37);
  const auto j = make_independent(random_joint(6, 3, 1, rng, 0.2));
  for (std::size_t n : {100u, 500u}) {
    int rej05 = 0, rej15 = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
      const auto s = draw_feasible(j, n, rng);
      const double g = gcov_n(pairwise_matrix(kGauss, s.points), s.labels);
      rej05 += critical_value_test(g, 0.05, n).decision == Decision::reject_h0;
      rej15 += critical_value_test(g, 0.15, n).decision == Decision::reject_h0;
    }
    EXPECT_LE(rej05 / double(reps), 0.05);
    EXPECT_LE(rej15 / double(reps), 0.15);
  }
}

TEST(AsymptoticCi, PointMassClassesExcludeZero) {
  Rng rng(38);
  const auto s = draw_feasible(two_atom_point_mass(), 200, rng);
  const auto ci = asymptotic_ci(pairwise_matrix(kGauss, s.points), s.labels, 0.05);
  EXPECT_GT(ci.lower, 0.0);
  EXPECT_TRUE(std::isfinite(ci.sigma_v_hat));
  EXPECT_LE(ci.lower, ci.estimate);
  EXPECT_GE(ci.upper, ci.estimate);
}

TEST(AsymptoticCi, IndependentVarianceVanishes) {
  Rng rng(39);
  const auto j = make_independent(dependent_joint());
  const auto s = draw_feasible(j, 2000, rng);
  EXPECT_LT(sigma_v_squared_hat(pairwise_matrix(kGauss, s.points), s.labels), 0.05);
}

TEST(AsymptoticCi, WarningsAndErrors) {
  Rng rng(40);
  const auto s = draw_feasible(dependent_joint(), 12, rng);
  const auto d = pairwise_matrix(kGauss, s.points);
  EXPECT_FALSE(asymptotic_ci(d, s.labels, 0.05).warnings.empty());
  EXPECT_THROW(asymptotic_ci(d, s.labels, 0.0), InvalidInput);
  EXPECT_THROW(asymptotic_ci(d, s.labels, 1.0), InvalidInput);
  const auto wide = asymptotic_ci(d, s.labels, 0.01);
  const auto narrow = asymptotic_ci(d, s.labels, 0.2);
  EXPECT_LT(wide.lower, narrow.lower);
  EXPECT_GT(wide.upper, narrow.upper);
}

// Property: the standardized statistic looks normal under dependence.
TEST(AsymptoticNormality, SkewnessAndKurtosisScreen) {
  const auto j = dependent_joint();
  const std::size_t reps = 5000, n = 500;
  std::vector<double> v(reps);
  parallel_for(reps, [&](std::size_t r) {
    Rng rng = substream(41, r);
    const auto s = draw_feasible(j, n, rng);
    v[r] = gcov_n(pairwise_matrix(kGauss, s.points), s.labels);
  });
  double mean = 0;
  for (double x : v) mean += x;
  mean /= reps;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : v) {
    const double c = x - mean;
    m2 += c * c;
    m3 += c * c * c;
    m4 += c * c * c * c;
  }
  m2 /= reps;
  m3 /= reps;
  m4 /= reps;
  const double skew = m3 / std::pow(m2, 1.5);
  const double excess = m4 / (m2 * m2) - 3.0;
  EXPECT_LT(std::abs(skew), 0.3);
  EXPECT_LT(std::abs(excess), 0.5);
}
