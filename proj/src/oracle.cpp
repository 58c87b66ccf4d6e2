#include "ginidep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ginidep/error.hpp"
#include "ginidep/parallel.hpp"

namespace ginidep {
namespace {

constexpr double kProbTol = 1e-12;

Matrix atom_distances(const DiscreteJoint& dist, const BoundedKernel& kernel) {
  const std::size_t m = dist.atom_count();
  Matrix d(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const double v = induced_distance(kernel, dist.support().row(a), dist.support().row(b));
      d(a, b) = v;
      d(b, a) = v;
    }
  }
  return d;
}

// sum_{a,b} u_a v_b d(a,b)
double bilinear(const Matrix& d, std::span<const double> u, std::span<const double> v) {
  CompensatedSum acc;
  for (std::size_t a = 0; a < d.rows(); ++a) {
    for (std::size_t b = 0; b < d.cols(); ++b) {
      acc.add(u[a] * v[b] * d(a, b));
    }
  }
  return acc.value();
}

void normalize(std::vector<double>& w) {
  const double s = compensated_sum(w);
  for (double& x : w) {
    x /= s;
  }
}

}  // namespace

DiscreteJoint DiscreteJoint::create(Matrix support, std::vector<double> class_probs,
                                    Matrix cond_pmf) {
  const std::size_t m = support.rows();
  const std::size_t k = class_probs.size();
  if (m == 0 || support.cols() == 0) {
    throw InvalidInput("DiscreteJoint: empty support");
  }
  if (k == 0) {
    throw InvalidInput("DiscreteJoint: no classes");
  }
  if (cond_pmf.rows() != k || cond_pmf.cols() != m) {
    throw InvalidInput("DiscreteJoint: cond_pmf must be K x m");
  }
  for (double p : class_probs) {
    if (!(p > 0.0)) {
      throw InvalidInput("DiscreteJoint: class probabilities must be positive");
    }
  }
  if (std::abs(compensated_sum(class_probs) - 1.0) > kProbTol) {
    throw InvalidInput("DiscreteJoint: class probabilities must sum to 1");
  }
  for (std::size_t r = 0; r < k; ++r) {
    for (double v : cond_pmf.row(r)) {
      if (!(v >= 0.0)) {
        throw InvalidInput("DiscreteJoint: conditional pmf entries must be nonnegative");
      }
    }
    if (std::abs(compensated_sum(cond_pmf.row(r)) - 1.0) > kProbTol) {
      throw InvalidInput("DiscreteJoint: conditional pmf row " + std::to_string(r) +
                         " does not sum to 1");
    }
  }
  return DiscreteJoint(std::move(support), std::move(class_probs), std::move(cond_pmf));
}

std::vector<double> DiscreteJoint::marginal() const {
  std::vector<double> f(atom_count());
  for (std::size_t a = 0; a < atom_count(); ++a) {
    CompensatedSum acc;
    for (std::size_t k = 0; k < class_count(); ++k) {
      acc.add(class_probs_[k] * cond_pmf_(k, a));
    }
    f[a] = acc.value();
  }
  return f;
}

bool DiscreteJoint::is_independent(double tol) const {
  const auto f = marginal();
  for (std::size_t k = 0; k < class_count(); ++k) {
    for (std::size_t a = 0; a < atom_count(); ++a) {
      if (std::abs(cond_pmf_(k, a) - f[a]) > tol) {
        return false;
      }
    }
  }
  return true;
}

DiscreteJoint::Sample DiscreteJoint::sample(std::size_t n, Rng& rng) const {
  std::discrete_distribution<int> pick_class(class_probs_.begin(), class_probs_.end());
  std::vector<std::discrete_distribution<std::size_t>> pick_atom;
  pick_atom.reserve(class_count());
  for (std::size_t k = 0; k < class_count(); ++k) {
    const auto row = cond_pmf_.row(k);
    pick_atom.emplace_back(row.begin(), row.end());
  }
  Sample s{Matrix(n, support_.cols()), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const int y = pick_class(rng);
    const std::size_t a = pick_atom[static_cast<std::size_t>(y)](rng);
    s.labels[i] = y;
    std::copy(support_.row(a).begin(), support_.row(a).end(), s.points.row(i).begin());
  }
  return s;
}

DiscreteJoint random_joint(std::size_t atoms, std::size_t classes, std::size_t dim, Rng& rng,
                           double min_class_prob, double scale) {
  if (atoms == 0 || classes == 0 || dim == 0) {
    throw InvalidInput("random_joint: sizes must be positive");
  }
  if (min_class_prob * static_cast<double>(classes) >= 1.0) {
    throw InvalidInput("random_joint: min_class_prob too large for the class count");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coord(-scale, scale);
  Matrix support(atoms, dim);
  for (double& v : support.data()) {
    v = coord(rng);
  }
  std::vector<double> p(classes);
  for (double& v : p) {
    v = unit(rng) + 1e-3;
  }
  normalize(p);
  // Mix toward uniform so every class gets at least min_class_prob.
  const double w = 1.0 - min_class_prob * static_cast<double>(classes);
  for (double& v : p) {
    v = min_class_prob + w * v;
  }
  normalize(p);
  Matrix cond(classes, atoms);
  for (std::size_t k = 0; k < classes; ++k) {
    std::vector<double> row(atoms);
    for (double& v : row) {
      v = unit(rng) + 1e-3;
    }
    normalize(row);
    std::copy(row.begin(), row.end(), cond.row(k).begin());
  }
  return DiscreteJoint::create(std::move(support), std::move(p), std::move(cond));
}

DiscreteJoint make_independent(const DiscreteJoint& dist) {
  const auto f = dist.marginal();
  Matrix cond(dist.class_count(), dist.atom_count());
  for (std::size_t k = 0; k < dist.class_count(); ++k) {
    std::copy(f.begin(), f.end(), cond.row(k).begin());
  }
  return DiscreteJoint::create(dist.support(),
                               std::vector<double>(dist.class_probs().begin(),
                                                   dist.class_probs().end()),
                               std::move(cond));
}

DiscreteJoint make_balanced(const DiscreteJoint& dist) {
  const std::size_t k = dist.class_count();
  return DiscreteJoint::create(dist.support(),
                               std::vector<double>(k, 1.0 / static_cast<double>(k)),
                               dist.cond_pmf());
}

PopulationGini population_gini(const DiscreteJoint& dist, const BoundedKernel& kernel) {
  const Matrix d = atom_distances(dist, kernel);
  const auto f = dist.marginal();
  PopulationGini g;
  g.delta = bilinear(d, f, f);
  CompensatedSum within;
  for (std::size_t k = 0; k < dist.class_count(); ++k) {
    const auto ck = dist.cond_pmf().row(k);
    g.delta_k.push_back(bilinear(d, ck, ck));
    within.add(dist.class_probs()[k] * g.delta_k.back());
  }
  if (!(g.delta > 0.0)) {
    throw DegenerateDistribution("marginal distribution is a point mass; gCor is undefined");
  }
  g.gcov = g.delta - within.value();
  g.gcor = g.gcov / g.delta;
  return g;
}

double population_dcov(const DiscreteJoint& dist, const BoundedKernel& kernel, DcovForm form) {
  const Matrix d = atom_distances(dist, kernel);
  const auto f = dist.marginal();
  const auto p = dist.class_probs();
  const std::size_t kc = dist.class_count();
  const double delta = bilinear(d, f, f);

  if (form == DcovForm::lemma1) {
    CompensatedSum acc;
    for (std::size_t k = 0; k < kc; ++k) {
      const auto ck = dist.cond_pmf().row(k);
      const double cross = bilinear(d, ck, f);
      const double within = bilinear(d, ck, ck);
      acc.add(p[k] * p[k] * (2.0 * cross - within - delta));
    }
    return acc.value();
  }

  // E d_X(X,X') d_Y(Y,Y'): only pairs with different labels contribute.
  CompensatedSum a_term;
  for (std::size_t k = 0; k < kc; ++k) {
    for (std::size_t l = 0; l < kc; ++l) {
      if (k != l) {
        a_term.add(p[k] * p[l] * bilinear(d, dist.cond_pmf().row(k), dist.cond_pmf().row(l)));
      }
    }
  }
  CompensatedSum sum_p2;
  for (double v : p) {
    sum_p2.add(v * v);
  }
  const double label_gmd = 1.0 - sum_p2.value();
  const double b_term = delta * label_gmd;
  // E[ E_{X'} d_X(X,X') * E_{Y'} d_Y(Y,Y') ] over the joint law of (X,Y).
  CompensatedSum c_term;
  for (std::size_t k = 0; k < kc; ++k) {
    for (std::size_t a = 0; a < dist.atom_count(); ++a) {
      const double joint = p[k] * dist.cond_pmf()(k, a);
      if (joint == 0.0) {
        continue;
      }
      CompensatedSum mean_dx;
      for (std::size_t b = 0; b < dist.atom_count(); ++b) {
        mean_dx.add(f[b] * d(a, b));
      }
      c_term.add(joint * mean_dx.value() * (1.0 - p[k]));
    }
  }
  return a_term.value() + b_term - 2.0 * c_term.value();
}

bool rejection_guard_satisfied(const DiscreteJoint& dist, std::size_t n) noexcept {
  const auto p = dist.class_probs();
  const double p_min = *std::min_element(p.begin(), p.end());
  return p_min * static_cast<double>(n) >= 8.0;
}

McResult mc_mean(const SampleStatistic& statistic, const DiscreteJoint& dist,
                 const BoundedKernel& kernel, std::size_t n, std::size_t reps, std::uint64_t seed,
                 std::size_t max_attempts) {
  if (n == 0 || reps == 0) {
    throw InvalidInput("mc_mean: n and reps must be at least 1");
  }
  if (n < 2 * dist.class_count()) {
    throw InfeasibleConfiguration("mc_mean: n = " + std::to_string(n) + " cannot give " +
                                  std::to_string(dist.class_count()) +
                                  " classes two samples each");
  }
  std::vector<double> values(reps);
  std::vector<std::size_t> redraws(reps, 0);
  parallel_for(reps, [&](std::size_t r) {
    Rng rng = substream(seed, r);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
      auto s = dist.sample(n, rng);
      std::vector<std::size_t> counts(dist.class_count(), 0);
      for (int y : s.labels) {
        ++counts[static_cast<std::size_t>(y)];
      }
      if (std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c >= 2; })) {
        values[r] = statistic(pairwise_matrix(kernel, s.points), s.labels);
        return;
      }
      ++redraws[r];
    }
    throw InfeasibleConfiguration("mc_mean: no sample with every class holding 2 points after " +
                                  std::to_string(max_attempts) + " attempts");
  });
  McResult out;
  out.reps = reps;
  const double m = static_cast<double>(reps);
  out.mean = compensated_sum(values) / m;
  CompensatedSum ss;
  for (double v : values) {
    ss.add((v - out.mean) * (v - out.mean));
  }
  out.std_error = reps > 1 ? std::sqrt(ss.value() / (m - 1.0) / m) : 0.0;
  for (std::size_t c : redraws) {
    out.redraws += c;
  }
  return out;
}

McResult mc_mean(Statistic statistic, const DiscreteJoint& dist, const BoundedKernel& kernel,
                 std::size_t n, std::size_t reps, std::uint64_t seed, std::size_t max_attempts) {
  if (!uses_distances(statistic)) {
    throw InvalidInput("mc_mean: eta2 is not a distance statistic");
  }
  return mc_mean(
      [statistic](const DistanceMatrix& d, std::span<const int> labels) {
        return LabelStatistic(statistic, d)(labels);
      },
      dist, kernel, n, reps, seed, max_attempts);
}

}  // namespace ginidep
