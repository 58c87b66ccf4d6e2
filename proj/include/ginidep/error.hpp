#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ginidep {

// Base class for every error raised by the library. The kind lets callers
// (notably the CLI) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  enum class Kind {
    invalid_input,
    insufficient_data,
    class_too_small,
    degenerate_distribution,
    degenerate_feature,
    infeasible_configuration,
  };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

  // True for failures caused by the data/statistic combination rather than
  // by malformed input.
  bool is_statistical() const noexcept { return kind_ != Kind::invalid_input; }

 private:
  Kind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(Kind::invalid_input, what) {}
};

class InsufficientData : public Error {
 public:
  explicit InsufficientData(const std::string& what) : Error(Kind::insufficient_data, what) {}
};

class ClassTooSmall : public Error {
 public:
  ClassTooSmall(int label, std::size_t size)
      : Error(Kind::class_too_small, "class " + std::to_string(label) + " has " +
                                         std::to_string(size) + " sample(s); at least 2 required"),
        label_(label),
        size_(size) {}

  int label() const noexcept { return label_; }
  std::size_t size() const noexcept { return size_; }

 private:
  int label_;
  std::size_t size_;
};

class DegenerateDistribution : public Error {
 public:
  explicit DegenerateDistribution(const std::string& what)
      : Error(Kind::degenerate_distribution, what) {}
};

class DegenerateFeature : public Error {
 public:
  explicit DegenerateFeature(const std::string& what) : Error(Kind::degenerate_feature, what) {}
};

class InfeasibleConfiguration : public Error {
 public:
  explicit InfeasibleConfiguration(const std::string& what)
      : Error(Kind::infeasible_configuration, what) {}
};

}  // namespace ginidep
