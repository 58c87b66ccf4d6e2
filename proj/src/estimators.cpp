#include "ginidep/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ginidep/error.hpp"

namespace ginidep {

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(label_names.size(), 0);
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= counts.size()) {
      throw InvalidInput("label code out of range");
    }
    ++counts[static_cast<std::size_t>(y)];
  }
  return counts;
}

ClassPartition::ClassPartition(std::span<const int> labels) : index_(labels.size()) {
  std::map<int, std::size_t> dense;
  for (int y : labels) {
    dense.emplace(y, 0);
  }
  std::size_t k = 0;
  for (auto& [code, idx] : dense) {
    idx = k++;
    codes_.push_back(code);
  }
  sizes_.assign(codes_.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    index_[i] = dense[labels[i]];
    ++sizes_[index_[i]];
  }
}

void ClassPartition::require_min_class_size(std::size_t minimum) const {
  for (std::size_t k = 0; k < sizes_.size(); ++k) {
    if (sizes_[k] < minimum) {
      throw ClassTooSmall(codes_[k], sizes_[k]);
    }
  }
}

double gmd(const DistanceMatrix& d, std::span<const std::size_t> subset) {
  const std::size_t m = subset.size();
  if (m < 2) {
    throw InsufficientData("gmd needs at least 2 indices, got " + std::to_string(m));
  }
  CompensatedSum acc;
  for (std::size_t a = 0; a < m; ++a) {
    if (subset[a] >= d.size()) {
      throw InvalidInput("gmd: index out of range");
    }
    const auto row = d.row(subset[a]);
    for (std::size_t b = a + 1; b < m; ++b) {
      acc.add(row[subset[b]]);
    }
  }
  return acc.value() * 2.0 / (static_cast<double>(m) * static_cast<double>(m - 1));
}

double gmd(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n < 2) {
    throw InsufficientData("gmd needs at least 2 points");
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = d.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      acc.add(row[j]);
    }
  }
  return acc.value() * 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
}

namespace {

void require_matching(const DistanceMatrix& d, std::span<const int> labels) {
  if (d.size() != labels.size()) {
    throw InvalidInput("distance matrix has " + std::to_string(d.size()) + " rows but " +
                       std::to_string(labels.size()) + " labels were given");
  }
}

}  // namespace

GiniStatistics gini_statistics(const DistanceMatrix& d, std::span<const int> labels) {
  require_matching(d, labels);
  const std::size_t n = d.size();
  if (n < 4) {
    throw InsufficientData("Gini statistics need at least 4 samples, got " + std::to_string(n));
  }
  const ClassPartition part(labels);
  part.require_min_class_size(2);
  const std::size_t k_count = part.class_count();
  const auto cls = part.dense();

  CompensatedSum total;
  std::vector<CompensatedSum> within(k_count);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = d.row(i);
    const std::size_t ci = cls[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      total.add(row[j]);
      if (cls[j] == ci) {
        within[ci].add(row[j]);
      }
    }
  }

  GiniStatistics s;
  const double nd = static_cast<double>(n);
  s.delta_hat = total.value() * 2.0 / (nd * (nd - 1.0));
  s.class_sizes.assign(part.sizes().begin(), part.sizes().end());
  s.delta_hat_k.resize(k_count);
  CompensatedSum weighted;
  for (std::size_t k = 0; k < k_count; ++k) {
    const double nk = static_cast<double>(s.class_sizes[k]);
    s.delta_hat_k[k] = within[k].value() * 2.0 / (nk * (nk - 1.0));
    weighted.add(nk / nd * s.delta_hat_k[k]);
    if (s.class_sizes[k] == 2) {
      s.warnings.push_back("class " + std::to_string(part.code(k)) +
                           " has only 2 samples; its within-class GMD rests on a single pair");
    }
  }
  s.gcov = s.delta_hat - weighted.value();
  s.gcor = s.delta_hat > 0.0 ? s.gcov / s.delta_hat : std::numeric_limits<double>::quiet_NaN();
  return s;
}

double gcov_n(const DistanceMatrix& d, std::span<const int> labels) {
  return gini_statistics(d, labels).gcov;
}

double gcor_n(const DistanceMatrix& d, std::span<const int> labels) {
  const auto s = gini_statistics(d, labels);
  if (!(s.delta_hat > 0.0)) {
    throw DegenerateDistribution("gcor_n undefined: all pairwise distances are zero");
  }
  return s.gcor;
}

Matrix u_center(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n < 4) {
    throw InsufficientData("U-centering needs at least 4 samples, got " + std::to_string(n));
  }
  std::vector<double> row_sum(n);
  CompensatedSum grand;
  for (std::size_t i = 0; i < n; ++i) {
    row_sum[i] = compensated_sum(d.row(i));
    grand.add(row_sum[i]);
  }
  const double nd = static_cast<double>(n);
  const double total_term = grand.value() / ((nd - 1.0) * (nd - 2.0));
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = d.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        // d is symmetric, so column sums equal row sums.
        a(i, j) = row[j] - row_sum[i] / (nd - 2.0) - row_sum[j] / (nd - 2.0) + total_term;
      }
    }
  }
  return a;
}

namespace {

double centered_inner(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ra = a.row(i);
    const auto rb = b.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        acc.add(ra[j] * rb[j]);
      }
    }
  }
  const double nd = static_cast<double>(n);
  return acc.value() / (nd * (nd - 3.0));
}

}  // namespace

double dcov_n(const DistanceMatrix& dx, const DistanceMatrix& dy) {
  if (dx.size() != dy.size()) {
    throw InvalidInput("dcov_n: matrices differ in size");
  }
  return centered_inner(u_center(dx), u_center(dy));
}

double dcor_n(const DistanceMatrix& dx, const DistanceMatrix& dy) {
  if (dx.size() != dy.size()) {
    throw InvalidInput("dcor_n: matrices differ in size");
  }
  const Matrix a = u_center(dx);
  const Matrix b = u_center(dy);
  const double xx = centered_inner(a, a);
  const double yy = centered_inner(b, b);
  if (!(xx > 0.0) || !(yy > 0.0)) {
    return 0.0;
  }
  return centered_inner(a, b) / std::sqrt(xx * yy);
}

double dcov_n_labels(const Matrix& centered_x, std::span<const int> labels) {
  const std::size_t n = centered_x.rows();
  if (labels.size() != n || centered_x.cols() != n) {
    throw InvalidInput("dcov_n_labels: shape mismatch");
  }
  if (n < 4) {
    throw InsufficientData("dcov_n needs at least 4 samples");
  }
  CompensatedSum same;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = centered_x.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (labels[i] == labels[j]) {
        same.add(row[j]);
      }
    }
  }
  const double nd = static_cast<double>(n);
  return -2.0 * same.value() / (nd * (nd - 3.0));
}

double label_self_dcov(std::span<const std::size_t> class_sizes) {
  std::size_t n_total = 0;
  double sum_sq = 0.0;
  for (std::size_t nk : class_sizes) {
    n_total += nk;
    sum_sq += static_cast<double>(nk) * static_cast<double>(nk);
  }
  if (n_total < 4) {
    throw InsufficientData("dcov_n needs at least 4 samples");
  }
  const double n = static_cast<double>(n_total);
  const double grand = (n * n - sum_sq) / ((n - 1.0) * (n - 2.0));
  auto centered = [&](std::size_t k, std::size_t l) {
    const double b = k == l ? 0.0 : 1.0;
    return b - (n - static_cast<double>(class_sizes[k])) / (n - 2.0) -
           (n - static_cast<double>(class_sizes[l])) / (n - 2.0) + grand;
  };
  CompensatedSum acc;
  for (std::size_t k = 0; k < class_sizes.size(); ++k) {
    for (std::size_t l = 0; l < class_sizes.size(); ++l) {
      const double nk = static_cast<double>(class_sizes[k]);
      const double pairs = k == l ? nk * (nk - 1.0) : nk * static_cast<double>(class_sizes[l]);
      const double b = centered(k, l);
      acc.add(pairs * b * b);
    }
  }
  return acc.value() / (n * (n - 3.0));
}

double dcov_plugin(const DistanceMatrix& d, std::span<const int> labels) {
  const auto g = gini_statistics(d, labels);
  const ClassPartition part(labels);
  const std::size_t n = d.size();
  std::vector<CompensatedSum> cross(part.class_count());
  for (std::size_t i = 0; i < n; ++i) {
    cross[part.class_of(i)].add(compensated_sum(d.row(i)));
  }
  const double nd = static_cast<double>(n);
  CompensatedSum acc;
  for (std::size_t k = 0; k < part.class_count(); ++k) {
    const double nk = static_cast<double>(g.class_sizes[k]);
    const double p = nk / nd;
    const double cross_k = cross[k].value() / (nk * (nd - 1.0));
    acc.add(p * p * (2.0 * cross_k - g.delta_hat_k[k] - g.delta_hat));
  }
  return acc.value();
}

double eta2(std::span<const double> feature, std::span<const int> labels) {
  const std::size_t n = feature.size();
  if (labels.size() != n) {
    throw InvalidInput("eta2: feature and label lengths differ");
  }
  if (n < 2) {
    throw InsufficientData("eta2 needs at least 2 samples");
  }
  const auto [lo, hi] = std::minmax_element(feature.begin(), feature.end());
  if (*lo == *hi) {
    throw DegenerateFeature("eta2 undefined for a constant feature");
  }
  const ClassPartition part(labels);
  const double mean = compensated_sum(feature) / static_cast<double>(n);
  std::vector<CompensatedSum> class_sum(part.class_count());
  CompensatedSum total_ss;
  for (std::size_t i = 0; i < n; ++i) {
    class_sum[part.class_of(i)].add(feature[i]);
    const double dev = feature[i] - mean;
    total_ss.add(dev * dev);
  }
  CompensatedSum between;
  for (std::size_t k = 0; k < part.class_count(); ++k) {
    const double nk = static_cast<double>(part.sizes()[k]);
    const double dev = class_sum[k].value() / nk - mean;
    between.add(nk * dev * dev);
  }
  return std::clamp(between.value() / total_ss.value(), 0.0, 1.0);
}

double gmd_1d_fast(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw InsufficientData("gmd_1d_fast needs at least 2 values");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double nd = static_cast<double>(n);
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    acc.add((2.0 * static_cast<double>(i + 1) - nd - 1.0) * sorted[i]);
  }
  return 2.0 * acc.value() / (nd * (nd - 1.0));
}

}  // namespace ginidep
