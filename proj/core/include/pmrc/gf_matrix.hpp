#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pmrc/galois.hpp"

namespace pmrc {

// Dense row-major matrix over GF(2^w).
class Matrix {
 public:
  Matrix(Field field, std::size_t rows, std::size_t cols);
  // Throws InvalidArgument on ragged rows or out-of-field values.
  Matrix(Field field, std::initializer_list<std::initializer_list<std::uint32_t>> rows);

  static Matrix identity(Field field, std::size_t n);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Element operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  Element& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  // Bounds-checked access.
  Element at(std::size_t r, std::size_t c) const;

  std::span<const Element> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Element> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

  std::size_t count_zeros() const noexcept;
  bool is_identity() const noexcept;

  friend bool operator==(const Matrix& a, const Matrix& b) noexcept {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Element> data_;
};

// Throws InvalidArgument on dimension or field mismatch.
Matrix multiply(const Matrix& a, const Matrix& b);

// Gauss-Jordan elimination; the pivot is the first nonzero entry at or below
// the diagonal. Throws SingularMatrix naming the column without a pivot.
// O(n^3) field operations.
Matrix invert(const Matrix& a);

Matrix transpose(const Matrix& a);

// Rows picked in the given order. Throws on out-of-range or duplicate indices.
Matrix select_rows(const Matrix& a, std::span<const std::size_t> rows);
Matrix select_cols(const Matrix& a, std::span<const std::size_t> cols);

std::size_t rank(const Matrix& a);

// Canonical text form: "w rows cols" then one line per row of
// space-separated decimal values.
void write_text(std::ostream& out, const Matrix& m);
Matrix read_text(std::istream& in);
std::string to_text(const Matrix& m);

}  // namespace pmrc
