#include "pmrc/gf_matrix.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "pmrc/error.hpp"
#include "pmrc/stats.hpp"

namespace pmrc {

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix::Matrix(Field field, std::initializer_list<std::initializer_list<std::uint32_t>> rows)
    : field_(std::move(field)), rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("ragged matrix initializer");
    for (std::uint32_t v : r) {
      if (!field_.contains(v)) throw InvalidArgument("matrix entry outside field");
      data_.push_back(static_cast<Element>(v));
    }
  }
}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Element Matrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw InvalidArgument("matrix index out of range");
  return (*this)(r, c);
}

std::size_t Matrix::count_zeros() const noexcept {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), Element{0}));
}

bool Matrix::is_identity() const noexcept {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if ((*this)(r, c) != (r == c ? 1 : 0)) return false;
    }
  }
  return true;
}

namespace {

// dst += c * src over a row.
void row_madd(const Field& f, std::span<Element> dst, std::span<const Element> src, Element c) {
  if (c == 0) return;
  if (c == 1) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    return;
  }
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (src[i] != 0) dst[i] ^= f.mul(c, src[i]);
  }
}

void row_scale(const Field& f, std::span<Element> row, Element c) {
  if (c == 1) return;
  for (auto& v : row) v = f.mul(c, v);
}

}  // namespace

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (!(a.field() == b.field())) throw InvalidArgument("matrix field mismatch");
  if (a.cols() != b.rows()) {
    throw InvalidArgument("matrix dimension mismatch: " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
  }
  Matrix out(a.field(), a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    for (std::size_t l = 0; l < a.cols(); ++l) row_madd(a.field(), dst, b.row(l), a(r, l));
  }
  return out;
}

Matrix invert(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("cannot invert a non-square matrix");
  stats::count_inversion();
  const Field& f = a.field();
  const std::size_t n = a.rows();
  Matrix work = a;
  Matrix inv = Matrix::identity(f, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work(pivot, col) == 0) ++pivot;
    if (pivot == n) throw SingularMatrix(col);
    if (pivot != col) {
      std::swap_ranges(work.row(pivot).begin(), work.row(pivot).end(), work.row(col).begin());
      std::swap_ranges(inv.row(pivot).begin(), inv.row(pivot).end(), inv.row(col).begin());
    }
    const Element scale = f.inv(work(col, col));
    row_scale(f, work.row(col), scale);
    row_scale(f, inv.row(col), scale);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Element factor = work(r, col);
      if (factor == 0) continue;
      row_madd(f, work.row(r), work.row(col), factor);
      row_madd(f, inv.row(r), inv.row(col), factor);
    }
  }
  return inv;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.field(), a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  }
  return t;
}

Matrix select_rows(const Matrix& a, std::span<const std::size_t> rows) {
  std::vector<bool> used(a.rows(), false);
  Matrix out(a.field(), rows.size(), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    if (r >= a.rows()) throw InvalidArgument("row index " + std::to_string(r) + " out of range");
    if (used[r]) throw InvalidArgument("duplicate row index " + std::to_string(r));
    used[r] = true;
    std::copy(a.row(r).begin(), a.row(r).end(), out.row(i).begin());
  }
  return out;
}

Matrix select_cols(const Matrix& a, std::span<const std::size_t> cols) {
  std::vector<bool> used(a.cols(), false);
  Matrix out(a.field(), a.rows(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const std::size_t c = cols[j];
    if (c >= a.cols()) throw InvalidArgument("column index " + std::to_string(c) + " out of range");
    if (used[c]) throw InvalidArgument("duplicate column index " + std::to_string(c));
    used[c] = true;
    for (std::size_t r = 0; r < a.rows(); ++r) out(r, j) = a(r, c);
  }
  return out;
}

std::size_t rank(const Matrix& a) {
  const Field& f = a.field();
  Matrix work = a;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < work.cols() && rank < work.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < work.rows() && work(pivot, col) == 0) ++pivot;
    if (pivot == work.rows()) continue;
    if (pivot != rank) {
      std::swap_ranges(work.row(pivot).begin(), work.row(pivot).end(), work.row(rank).begin());
    }
    const Element scale = f.inv(work(rank, col));
    row_scale(f, work.row(rank), scale);
    for (std::size_t r = rank + 1; r < work.rows(); ++r) {
      row_madd(f, work.row(r), work.row(rank), work(r, col));
    }
    ++rank;
  }
  return rank;
}

void write_text(std::ostream& out, const Matrix& m) {
  out << m.field().width() << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << m(r, c);
    }
    out << '\n';
  }
}

Matrix read_text(std::istream& in) {
  unsigned width = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> width >> rows >> cols)) throw FormatError("matrix header must be 'w rows cols'");
  Field field = Field::make(width);
  Matrix m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::uint64_t v = 0;
      if (!(in >> v)) {
        throw FormatError("matrix truncated at row " + std::to_string(r) + ", column " +
                          std::to_string(c));
      }
      if (!field.contains(static_cast<std::uint32_t>(v)) || v > field.order()) {
        throw FormatError("matrix value " + std::to_string(v) + " outside GF(2^" +
                          std::to_string(width) + ")");
      }
      m(r, c) = static_cast<Element>(v);
    }
  }
  return m;
}

std::string to_text(const Matrix& m) {
  std::ostringstream out;
  write_text(out, m);
  return out.str();
}

}  // namespace pmrc
