#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ginidep/matrix.hpp"

namespace ginidep {

inline constexpr double kDefaultSigma2 = 10.0;

// A bounded Mercer kernel together with the distance it induces in its RKHS.
//
//   weighted_gaussian: k(x,x') = exp(-|x-x'|^2 / sigma2) / 2, which induces
//                      d(x,x') = sqrt(1 - exp(-|x-x'|^2 / sigma2)) in [0, 1).
//   raw_euclidean:     the inner-product kernel; d(x,x') = |x-x'|. Unbounded,
//                      so the concentration bounds do not apply to it.
class BoundedKernel {
 public:
  enum class Mode { weighted_gaussian, raw_euclidean };

  static BoundedKernel weighted_gaussian(double sigma2 = kDefaultSigma2);
  static BoundedKernel raw_euclidean() noexcept { return BoundedKernel(Mode::raw_euclidean, 0.0); }

  Mode mode() const noexcept { return mode_; }
  double sigma2() const noexcept { return sigma2_; }
  bool is_bounded() const noexcept { return mode_ == Mode::weighted_gaussian; }

  // Distance as a function of the squared Euclidean separation.
  double distance_from_squared(double squared_norm) const noexcept;

  std::string describe() const;

 private:
  BoundedKernel(Mode mode, double sigma2) noexcept : mode_(mode), sigma2_(sigma2) {}

  Mode mode_;
  double sigma2_;
};

double induced_distance(const BoundedKernel& kernel, std::span<const double> x,
                        std::span<const double> x2);

// Symmetric n x n matrix of pairwise distances with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  // Validates symmetry, zero diagonal and nonnegativity.
  static DistanceMatrix from_entries(std::size_t n, std::vector<double> entries);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }
  std::span<const double> entries() const noexcept { return entries_; }

  // Sets both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double value) {
    entries_[i * n_ + j] = value;
    entries_[j * n_ + i] = value;
  }

  // Reorders rows and columns: result(i,j) = this(order[i], order[j]).
  DistanceMatrix permuted(std::span<const std::size_t> order) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

DistanceMatrix pairwise_matrix(const BoundedKernel& kernel, const Matrix& points);
DistanceMatrix pairwise_matrix(const BoundedKernel& kernel, std::span<const double> values);

// Categorical set distance: 0 for equal labels, 1 otherwise.
constexpr int set_distance(int y, int y2) noexcept { return y == y2 ? 0 : 1; }

DistanceMatrix label_distance_matrix(std::span<const int> labels);

}  // namespace ginidep
