#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ginidep/kernels.hpp"
#include "ginidep/matrix.hpp"

namespace ginidep {

// n samples of q numeric features with a categorical label per sample.
// Labels are stored as integer codes indexing label_names.
struct LabeledDataset {
  std::vector<std::string> feature_names;
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> label_names;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t feature_count() const noexcept { return features.cols(); }
  // Number of samples per label code; length = label_names.size().
  std::vector<std::size_t> class_counts() const;
};

// Maps arbitrary label codes onto dense class indices 0..K-1, ordered by code.
class ClassPartition {
 public:
  explicit ClassPartition(std::span<const int> labels);

  std::size_t sample_count() const noexcept { return index_.size(); }
  std::size_t class_count() const noexcept { return codes_.size(); }
  std::size_t class_of(std::size_t sample) const { return index_[sample]; }
  std::span<const std::size_t> dense() const noexcept { return index_; }
  std::span<const std::size_t> sizes() const noexcept { return sizes_; }
  int code(std::size_t k) const { return codes_[k]; }

  // Throws ClassTooSmall for the first class with fewer than two members.
  void require_min_class_size(std::size_t minimum = 2) const;

 private:
  std::vector<int> codes_;
  std::vector<std::size_t> index_;
  std::vector<std::size_t> sizes_;
};

// Gini mean difference over a subset: the size-2 U-statistic
// binom(m,2)^{-1} * sum_{i<j in subset} D[i][j].
double gmd(const DistanceMatrix& d, std::span<const std::size_t> subset);
double gmd(const DistanceMatrix& d);

struct GiniStatistics {
  double delta_hat = 0.0;               // GMD of the whole sample
  std::vector<double> delta_hat_k;      // within-class GMDs, dense class order
  std::vector<std::size_t> class_sizes;
  double gcov = 0.0;                    // delta_hat - sum_k (n_k/n) delta_hat_k
  double gcor = 0.0;                    // gcov / delta_hat; NaN when delta_hat == 0
  std::vector<std::string> warnings;
};

// All Gini quantities in one O(n^2) pass. Requires n_k >= 2 for every class.
GiniStatistics gini_statistics(const DistanceMatrix& d, std::span<const int> labels);

double gcov_n(const DistanceMatrix& d, std::span<const int> labels);
// Throws DegenerateDistribution when every distance is zero.
double gcor_n(const DistanceMatrix& d, std::span<const int> labels);

// U-centered distance matrix; every row sums to zero.
Matrix u_center(const DistanceMatrix& d);

// Unbiased distance covariance U-statistic (1/(n(n-3))) sum_{i!=j} A_ij B_ij.
double dcov_n(const DistanceMatrix& dx, const DistanceMatrix& dy);
// dcov_n(Dx,Dy) / sqrt(dcov_n(Dx,Dx) dcov_n(Dy,Dy)); 0 when a self term is <= 0.
double dcor_n(const DistanceMatrix& dx, const DistanceMatrix& dy);

// dcov_n against the set-distance matrix of the labels, evaluated without
// materializing it: since U-centered rows sum to zero,
// sum_{i!=j} A_ij B_ij = -sum_{i!=j, y_i=y_j} A_ij.
double dcov_n_labels(const Matrix& centered_x, std::span<const int> labels);
// dcov_n(Dy,Dy) for the set-distance matrix, from class sizes alone.
double label_self_dcov(std::span<const std::size_t> class_sizes);

// Plug-in version of the class-weighted dCov identity:
// sum_k phat_k^2 [2 cross_k - delta_hat_k - delta_hat], where cross_k is the
// mean distance from members of class k to every other sample.
double dcov_plugin(const DistanceMatrix& d, std::span<const int> labels);

// Correlation ratio: between-class sum of squares over total sum of squares.
double eta2(std::span<const double> feature, std::span<const int> labels);

// O(n log n) GMD of 1-D values under the Euclidean distance.
double gmd_1d_fast(std::span<const double> values);

}  // namespace ginidep
