#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ginidep/kernels.hpp"
#include "ginidep/matrix.hpp"
#include "ginidep/random.hpp"
#include "ginidep/statistic.hpp"

namespace ginidep {

// Finite joint law of (X, Y): Y takes class k with probability p_k and, given
// Y = k, X is drawn from the atoms of `support` with pmf cond_pmf row k.
class DiscreteJoint {
 public:
  static DiscreteJoint create(Matrix support, std::vector<double> class_probs, Matrix cond_pmf);

  const Matrix& support() const noexcept { return support_; }
  std::span<const double> class_probs() const noexcept { return class_probs_; }
  const Matrix& cond_pmf() const noexcept { return cond_pmf_; }
  std::size_t atom_count() const noexcept { return support_.rows(); }
  std::size_t class_count() const noexcept { return class_probs_.size(); }

  // sum_k p_k cond_pmf[k].
  std::vector<double> marginal() const;
  // Every conditional pmf equals the marginal within tol.
  bool is_independent(double tol = 1e-12) const;

  struct Sample {
    Matrix points;
    std::vector<int> labels;
  };
  Sample sample(std::size_t n, Rng& rng) const;

 private:
  DiscreteJoint(Matrix support, std::vector<double> class_probs, Matrix cond_pmf)
      : support_(std::move(support)),
        class_probs_(std::move(class_probs)),
        cond_pmf_(std::move(cond_pmf)) {}

  Matrix support_;
  std::vector<double> class_probs_;
  Matrix cond_pmf_;
};

// Random joint with atoms drawn uniformly from [-scale, scale]^dim. Class
// probabilities are drawn so that each is at least min_class_prob.
DiscreteJoint random_joint(std::size_t atoms, std::size_t classes, std::size_t dim, Rng& rng,
                           double min_class_prob = 0.0, double scale = 2.0);
// Same support and class probabilities, every conditional replaced by the marginal.
DiscreteJoint make_independent(const DiscreteJoint& dist);
// Same support and conditionals with equal class probabilities.
DiscreteJoint make_balanced(const DiscreteJoint& dist);

struct PopulationGini {
  double delta = 0.0;
  std::vector<double> delta_k;
  double gcov = 0.0;
  double gcor = 0.0;
};

// Exact Delta, Delta_k, gCov = Delta - sum p_k Delta_k and gCor = gCov / Delta.
// Throws DegenerateDistribution when Delta = 0.
PopulationGini population_gini(const DiscreteJoint& dist, const BoundedKernel& kernel);

enum class DcovForm {
  definition,  // E d d' + E d E d' - 2 E[E' d E' d'] with the set distance on Y
  lemma1,      // sum_k p_k^2 [2 E d(X_k, X) - Delta_k - Delta]
};

double population_dcov(const DiscreteJoint& dist, const BoundedKernel& kernel, DcovForm form);

// Whether min_k p_k * n >= 8, the regime where conditioning draws on n_k >= 2
// has a negligible effect on estimator means.
bool rejection_guard_satisfied(const DiscreteJoint& dist, std::size_t n) noexcept;

using SampleStatistic = std::function<double(const DistanceMatrix&, std::span<const int>)>;

struct McResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
  std::size_t redraws = 0;  // samples rejected for having a class with n_k < 2
};

// Monte Carlo mean of a statistic over `reps` iid samples of size n. Samples
// in which some class has fewer than two points are redrawn; a replicate that
// fails max_attempts times raises InfeasibleConfiguration. Replicate r uses
// substream (seed, r), so the result does not depend on the thread count.
McResult mc_mean(const SampleStatistic& statistic, const DiscreteJoint& dist,
                 const BoundedKernel& kernel, std::size_t n, std::size_t reps, std::uint64_t seed,
                 std::size_t max_attempts = 1000);
McResult mc_mean(Statistic statistic, const DiscreteJoint& dist, const BoundedKernel& kernel,
                 std::size_t n, std::size_t reps, std::uint64_t seed,
                 std::size_t max_attempts = 1000);

}  // namespace ginidep
