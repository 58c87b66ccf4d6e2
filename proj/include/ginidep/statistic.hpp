#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ginidep/estimators.hpp"

namespace ginidep {

enum class Statistic { gcov, gcor, dcov, dcor, dcov_plugin, eta2 };

std::string_view to_string(Statistic s) noexcept;
std::optional<Statistic> parse_statistic(std::string_view name) noexcept;

// True for statistics computed from a distance matrix (everything but eta2).
constexpr bool uses_distances(Statistic s) noexcept { return s != Statistic::eta2; }

// A dependence statistic bound to one feature sample, re-evaluable against any
// labelling of that sample. Work that depends only on the feature (U-centering,
// row sums, self-covariance) is done once at construction, which is what makes
// permutation and simulation loops cheap.
class LabelStatistic {
 public:
  LabelStatistic(Statistic kind, const DistanceMatrix& d);
  // eta2 only.
  LabelStatistic(Statistic kind, std::span<const double> values);

  Statistic kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return n_; }

  double operator()(std::span<const int> labels) const;

 private:
  Statistic kind_;
  std::size_t n_ = 0;
  DistanceMatrix distances_;   // gini family
  Matrix centered_;            // dcov family
  double self_dcov_x_ = 0.0;
  std::vector<double> values_; // eta2
};

}  // namespace ginidep
