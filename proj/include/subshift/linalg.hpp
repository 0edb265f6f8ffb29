#pragma once

#include <optional>
#include <vector>

#include "subshift/types.hpp"

namespace subshift {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalMatrix operator*(const RationalMatrix& rhs) const;
  RationalMatrix transpose() const;
  bool operator==(const RationalMatrix& rhs) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> row_reduce(RationalMatrix& m);

/// Basis of {x : A x = 0}. Each basis vector has a 1 at its free column.
std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& a);

/// Unique solution of A x = b, or nullopt when singular or inconsistent.
std::optional<std::vector<Rational>> solve_unique(const RationalMatrix& a, const std::vector<Rational>& b);

std::vector<Rational> multiply(const RationalMatrix& a, const std::vector<Rational>& x);
std::vector<Rational> multiply(const std::vector<Rational>& x, const RationalMatrix& a);

}  // namespace subshift
