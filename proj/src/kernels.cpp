#include "ginidep/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ginidep/error.hpp"
#include "ginidep/parallel.hpp"

namespace ginidep {

BoundedKernel BoundedKernel::weighted_gaussian(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidInput("sigma2 must be a positive finite number");
  }
  return BoundedKernel(Mode::weighted_gaussian, sigma2);
}

double BoundedKernel::distance_from_squared(double squared_norm) const noexcept {
  if (mode_ == Mode::raw_euclidean) {
    return std::sqrt(squared_norm);
  }
  // 1 - exp(-s) via expm1 keeps precision for separations far below sigma.
  // Far separations round to 1, so cap at the largest double below 1.
  static constexpr double kBelowOne = 1.0 - 0x1p-53;
  return std::min(std::sqrt(-std::expm1(-squared_norm / sigma2_)), kBelowOne);
}

std::string BoundedKernel::describe() const {
  if (mode_ == Mode::raw_euclidean) {
    return "raw_euclidean";
  }
  std::ostringstream os;
  os << "weighted_gaussian(sigma2=" << sigma2_ << ")";
  return os.str();
}

double induced_distance(const BoundedKernel& kernel, std::span<const double> x,
                        std::span<const double> x2) {
  if (x.size() != x2.size()) {
    throw InvalidInput("induced_distance: dimension mismatch (" + std::to_string(x.size()) +
                       " vs " + std::to_string(x2.size()) + ")");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - x2[k];
    s += diff * diff;
  }
  return kernel.distance_from_squared(s);
}

DistanceMatrix DistanceMatrix::from_entries(std::size_t n, std::vector<double> entries) {
  if (entries.size() != n * n) {
    throw InvalidInput("distance matrix must have n*n entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (entries[i * n + i] != 0.0) {
      throw InvalidInput("distance matrix must have a zero diagonal");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = entries[i * n + j];
      if (a != entries[j * n + i]) {
        throw InvalidInput("distance matrix must be symmetric");
      }
      if (!(a >= 0.0)) {
        throw InvalidInput("distance matrix entries must be nonnegative");
      }
    }
  }
  DistanceMatrix d;
  d.n_ = n;
  d.entries_ = std::move(entries);
  return d;
}

DistanceMatrix DistanceMatrix::permuted(std::span<const std::size_t> order) const {
  if (order.size() != n_) {
    throw InvalidInput("permutation length does not match matrix size");
  }
  DistanceMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      out.entries_[i * n_ + j] = entries_[order[i] * n_ + order[j]];
    }
  }
  return out;
}

DistanceMatrix pairwise_matrix(const BoundedKernel& kernel, const Matrix& points) {
  const std::size_t n = points.rows();
  if (n < 2) {
    throw InsufficientData("pairwise_matrix needs at least 2 points, got " + std::to_string(n));
  }
  DistanceMatrix d(n);
  // Each (i,j) entry is written by exactly one row task.
  parallel_for(n, [&](std::size_t i) {
    const auto xi = points.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      d.set(i, j, induced_distance(kernel, xi, points.row(j)));
    }
  });
  return d;
}

DistanceMatrix pairwise_matrix(const BoundedKernel& kernel, std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw InsufficientData("pairwise_matrix needs at least 2 points, got " + std::to_string(n));
  }
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double diff = values[i] - values[j];
      d.set(i, j, kernel.distance_from_squared(diff * diff));
    }
  }
  return d;
}

DistanceMatrix label_distance_matrix(std::span<const int> labels) {
  const std::size_t n = labels.size();
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d.set(i, j, set_distance(labels[i], labels[j]));
    }
  }
  return d;
}

}  // namespace ginidep
