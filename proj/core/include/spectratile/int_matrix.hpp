#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace spectratile {

using Integer = mpz_class;

/// Dense row-major matrix of arbitrary-precision integers.
///
/// Always at least 1x1. Text form is "rows cols" followed by one line per
/// row of space-separated decimal integers.
class IntMatrix {
public:
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries);

  // Convenience for small literal matrices in fixtures and tests.
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix zero(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<const Integer> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }
  const std::vector<Integer>& entries() const noexcept { return entries_; }

  IntMatrix transpose() const;

  // Every entry replaced by its representative in [0, modulus).
  IntMatrix reduced(const Integer& modulus) const;

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Integer> entries_;
};

// Least nonnegative residue; modulus must be positive.
Integer mod_floor(const Integer& value, const Integer& modulus);

std::string format_matrix(const IntMatrix& m);
IntMatrix parse_matrix(std::istream& in);
IntMatrix parse_matrix(const std::string& text);

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

} // namespace spectratile
