#include "ginidep/statistic.hpp"

#include <cmath>

#include "ginidep/error.hpp"

namespace ginidep {

std::string_view to_string(Statistic s) noexcept {
  switch (s) {
    case Statistic::gcov: return "gcov";
    case Statistic::gcor: return "gcor";
    case Statistic::dcov: return "dcov";
    case Statistic::dcor: return "dcor";
    case Statistic::dcov_plugin: return "dcov_plugin";
    case Statistic::eta2: return "eta2";
  }
  return "unknown";
}

std::optional<Statistic> parse_statistic(std::string_view name) noexcept {
  for (Statistic s : {Statistic::gcov, Statistic::gcor, Statistic::dcov, Statistic::dcor,
                      Statistic::dcov_plugin, Statistic::eta2}) {
    if (to_string(s) == name) {
      return s;
    }
  }
  return std::nullopt;
}

LabelStatistic::LabelStatistic(Statistic kind, const DistanceMatrix& d)
    : kind_(kind), n_(d.size()) {
  switch (kind) {
    case Statistic::gcov:
    case Statistic::gcor:
    case Statistic::dcov_plugin:
      distances_ = d;
      break;
    case Statistic::dcov:
    case Statistic::dcor: {
      centered_ = u_center(d);
      CompensatedSum acc;
      for (double a : centered_.data()) {
        acc.add(a * a);
      }
      const double nd = static_cast<double>(n_);
      self_dcov_x_ = acc.value() / (nd * (nd - 3.0));
      break;
    }
    case Statistic::eta2:
      throw InvalidInput("eta2 is computed from raw feature values, not distances");
  }
}

LabelStatistic::LabelStatistic(Statistic kind, std::span<const double> values)
    : kind_(kind), n_(values.size()), values_(values.begin(), values.end()) {
  if (kind != Statistic::eta2) {
    throw InvalidInput("only eta2 is computed from raw feature values");
  }
}

double LabelStatistic::operator()(std::span<const int> labels) const {
  if (labels.size() != n_) {
    throw InvalidInput("label count does not match the bound sample");
  }
  switch (kind_) {
    case Statistic::gcov:
      return gcov_n(distances_, labels);
    case Statistic::gcor:
      return gcor_n(distances_, labels);
    case Statistic::dcov_plugin:
      return dcov_plugin(distances_, labels);
    case Statistic::dcov:
      return dcov_n_labels(centered_, labels);
    case Statistic::dcor: {
      const ClassPartition part(labels);
      const double yy = label_self_dcov(part.sizes());
      if (!(self_dcov_x_ > 0.0) || !(yy > 0.0)) {
        return 0.0;
      }
      return dcov_n_labels(centered_, labels) / std::sqrt(self_dcov_x_ * yy);
    }
    case Statistic::eta2:
      return eta2(values_, labels);
  }
  return 0.0;
}

}  // namespace ginidep
