#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pmrc/gf_matrix.hpp"

namespace pmrc {

enum class BlockRole : std::uint8_t { Data, Precoded, Encoded };

// Equal-sized byte blocks stored contiguously.
class BlockVector {
 public:
  BlockVector() = default;
  // Zero-filled.
  BlockVector(std::size_t count, std::size_t block_size, BlockRole role = BlockRole::Data);

  std::size_t size() const noexcept { return count_; }
  std::size_t block_size() const noexcept { return block_size_; }
  BlockRole role() const noexcept { return role_; }
  void set_role(BlockRole role) noexcept { role_ = role; }

  std::span<std::uint8_t> block(std::size_t i) noexcept {
    return {data_.data() + i * block_size_, block_size_};
  }
  std::span<const std::uint8_t> block(std::size_t i) const noexcept {
    return {data_.data() + i * block_size_, block_size_};
  }
  std::span<std::uint8_t> bytes() noexcept { return data_; }
  std::span<const std::uint8_t> bytes() const noexcept { return data_; }

  // Contents only; the role is metadata.
  friend bool operator==(const BlockVector& a, const BlockVector& b) noexcept {
    return a.count_ == b.count_ && a.block_size_ == b.block_size_ && a.data_ == b.data_;
  }

 private:
  std::size_t count_ = 0;
  std::size_t block_size_ = 0;
  BlockRole role_ = BlockRole::Data;
  std::vector<std::uint8_t> data_;
};

// The alpha blocks a node stores for one stripe. Nodes are numbered from 0.
struct Share {
  std::size_t node = 0;
  BlockVector blocks;

  friend bool operator==(const Share&, const Share&) = default;
};

// Precompiled linear map over blocks: out[r] = sum_c coeffs(r, c) * in[c].
// Zero coefficients are dropped at construction, rows equal to a unit
// vector become plain copies.
class LinearMap {
 public:
  explicit LinearMap(const Matrix& coeffs);

  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t outputs() const noexcept { return rows_.size(); }
  // Field multiplications per block (terms with a coefficient other than 1).
  std::size_t multiplies() const noexcept;
  std::size_t terms() const noexcept;
  // Input indices with a nonzero coefficient in any row.
  std::vector<std::size_t> used_inputs() const;

  void apply(std::span<const std::span<const std::uint8_t>> in,
             std::span<const std::span<std::uint8_t>> out) const;

 private:
  struct Term {
    std::size_t input;
    Element coeff;
  };
  Field field_;
  std::size_t inputs_;
  std::vector<std::vector<Term>> rows_;
};

// Block views of a BlockVector, for LinearMap::apply.
std::vector<std::span<const std::uint8_t>> const_views(const BlockVector& v);
std::vector<std::span<std::uint8_t>> views(BlockVector& v);

}  // namespace pmrc
