#include "ginidep/matrix.hpp"

#include "ginidep/error.hpp"

namespace ginidep {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidInput("matrix data size does not match its shape");
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t q = n == 0 ? 0 : rows.begin()->size();
  Matrix m(n, q);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != q) {
      throw InvalidInput("ragged rows in matrix literal");
    }
    std::size_t j = 0;
    for (double v : r) {
      m(i, j++) = v;
    }
    ++i;
  }
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

std::vector<double> Matrix::column_copy(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    out[i] = (*this)(i, j);
  }
  return out;
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) {
    acc.add(v);
  }
  return acc.value();
}

}  // namespace ginidep
