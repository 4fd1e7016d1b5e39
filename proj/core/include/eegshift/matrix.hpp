#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace eegshift {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Feature rows with binary labels (1 = Left, 0 = Right) and the subject of each row.
struct LabeledMatrix {
  Matrix X;
  std::vector<int> y;
  std::vector<std::uint32_t> subject_ids;

  std::size_t size() const noexcept { return y.size(); }
  std::size_t features() const noexcept { return X.cols(); }

  /// Shapes agree, entries finite, labels in {0, 1}. Throws std::invalid_argument.
  void validate() const;
  bool has_both_classes() const;

  /// Rows whose index appears in `rows`, in that order.
  LabeledMatrix subset(std::span<const std::size_t> rows) const;

  friend bool operator==(const LabeledMatrix&, const LabeledMatrix&) = default;
};

}  // namespace eegshift
