#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tbent {

/// Dense square matrix, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  static SquareMatrix identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * n_ + col]; }
  double operator()(std::size_t row, std::size_t col) const noexcept { return data_[row * n_ + col]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * n_, n_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * n_, n_}; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool is_symmetric() const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Symmetric tridiagonal matrix: `diagonal` has n entries, `off_diagonal`
/// has n-1 entries with off_diagonal[i] = T(i, i+1) = T(i+1, i).
struct Tridiagonal {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;

  std::size_t size() const noexcept { return diagonal.size(); }

  SquareMatrix to_dense() const {
    SquareMatrix m(size());
    for (std::size_t i = 0; i < size(); ++i) m(i, i) = diagonal[i];
    for (std::size_t i = 0; i + 1 < size(); ++i) {
      m(i, i + 1) = off_diagonal[i];
      m(i + 1, i) = off_diagonal[i];
    }
    return m;
  }

  friend bool operator==(const Tridiagonal&, const Tridiagonal&) = default;
};

}  // namespace tbent
