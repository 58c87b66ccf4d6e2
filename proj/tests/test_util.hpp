#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "ginidep/matrix.hpp"
#include "ginidep/random.hpp"

namespace testutil {

// Random orthonormal q x q matrix by Gram-Schmidt on Gaussian columns.
inline ginidep::Matrix random_orthonormal(std::size_t q, ginidep::Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> cols;
  while (cols.size() < q) {
    std::vector<double> v(q);
    for (double& x : v) x = g(rng);
    for (const auto& c : cols) {
      double dot = 0;
      for (std::size_t i = 0; i < q; ++i) dot += v[i] * c[i];
      for (std::size_t i = 0; i < q; ++i) v[i] -= dot * c[i];
    }
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-6) continue;
    for (double& x : v) x /= norm;
    cols.push_back(v);
  }
  ginidep::Matrix r(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) r(i, j) = cols[j][i];
  return r;
}

// Applies x -> R x + b to every row.
inline ginidep::Matrix rigid_motion(const ginidep::Matrix& points, const ginidep::Matrix& r,
                                    const std::vector<double>& b) {
  ginidep::Matrix out(points.rows(), points.cols());
  for (std::size_t n = 0; n < points.rows(); ++n)
    for (std::size_t i = 0; i < points.cols(); ++i) {
      double s = b[i];
      for (std::size_t j = 0; j < points.cols(); ++j) s += r(i, j) * points(n, j);
      out(n, i) = s;
    }
  return out;
}

inline ginidep::Matrix gaussian_points(std::size_t n, std::size_t q, ginidep::Rng& rng,
                                       double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ginidep::Matrix m(n, q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < q; ++j) m(i, j) = g(rng);
  return m;
}

inline std::vector<int> random_labels(std::size_t n, int classes, ginidep::Rng& rng) {
  // Round-robin base guarantees at least two members per class when n >= 2K.
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % classes);
  std::shuffle(y.begin(), y.end(), rng);
  return y;
}

}  // namespace testutil
