#include "pmrc/blocks.hpp"

#include <cstring>

#include "pmrc/error.hpp"

namespace pmrc {

BlockVector::BlockVector(std::size_t count, std::size_t block_size, BlockRole role)
    : count_(count), block_size_(block_size), role_(role), data_(count * block_size, 0) {}

LinearMap::LinearMap(const Matrix& coeffs) : field_(coeffs.field()), inputs_(coeffs.cols()) {
  rows_.resize(coeffs.rows());
  for (std::size_t r = 0; r < coeffs.rows(); ++r) {
    for (std::size_t c = 0; c < coeffs.cols(); ++c) {
      if (coeffs(r, c) != 0) rows_[r].push_back({c, coeffs(r, c)});
    }
  }
}

std::size_t LinearMap::multiplies() const noexcept {
  std::size_t count = 0;
  for (const auto& row : rows_) {
    for (const Term& t : row) count += t.coeff != 1;
  }
  return count;
}

std::size_t LinearMap::terms() const noexcept {
  std::size_t count = 0;
  for (const auto& row : rows_) count += row.size();
  return count;
}

std::vector<std::size_t> LinearMap::used_inputs() const {
  std::vector<bool> used(inputs_, false);
  for (const auto& row : rows_) {
    for (const Term& t : row) used[t.input] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < inputs_; ++i) {
    if (used[i]) out.push_back(i);
  }
  return out;
}

void LinearMap::apply(std::span<const std::span<const std::uint8_t>> in,
                      std::span<const std::span<std::uint8_t>> out) const {
  if (in.size() != inputs_ || out.size() != rows_.size()) {
    throw InvalidArgument("linear map arity mismatch");
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto& row = rows_[r];
    std::span<std::uint8_t> dst = out[r];
    if (row.empty()) {
      std::memset(dst.data(), 0, dst.size());
      continue;
    }
    field_.region_mul(dst, in[row[0].input], row[0].coeff);
    for (std::size_t t = 1; t < row.size(); ++t) {
      field_.region_madd(dst, in[row[t].input], row[t].coeff);
    }
  }
}

std::vector<std::span<const std::uint8_t>> const_views(const BlockVector& v) {
  std::vector<std::span<const std::uint8_t>> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v.block(i));
  return out;
}

std::vector<std::span<std::uint8_t>> views(BlockVector& v) {
  std::vector<std::span<std::uint8_t>> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v.block(i));
  return out;
}

}  // namespace pmrc
