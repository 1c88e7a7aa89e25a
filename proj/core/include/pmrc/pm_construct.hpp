#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmrc/galois.hpp"
#include "pmrc/gf_matrix.hpp"

namespace pmrc {

enum class Variant : std::uint8_t { Msr = 0, Mbr = 1 };
enum class Construction : std::uint8_t { Vanilla = 0, Sparse = 1 };

std::string_view to_string(Variant v) noexcept;
std::string_view to_string(Construction c) noexcept;
// Case-sensitive "msr"/"mbr" and "vanilla"/"sparse"; throws InvalidArgument.
Variant parse_variant(std::string_view s);
Construction parse_construction(std::string_view s);

// Parameters of a product-matrix regenerating code.
//
//   MSR: d = 2k-2, alpha = d-k+1 = k-1, B = k*alpha
//   MBR: k <= d < n, alpha = d,         B = k(2d-k+1)/2
//
// Every node stores alpha blocks; a stripe holds B data blocks.
struct CodeParams {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  Variant variant = Variant::Msr;
  std::size_t alpha = 0;
  std::size_t data_blocks = 0;  // B

  // Throws InvalidArgument for n <= d, d < k, k < 2 and Unsupported for
  // MSR with d != 2k-2.
  static CodeParams make(std::size_t n, std::size_t k, std::size_t d, Variant variant);
  // MSR family n = 2k-1, d = 2k-2.
  static CodeParams msr(std::size_t k) { return make(2 * k - 1, k, 2 * k - 2, Variant::Msr); }

  std::size_t encoded_blocks() const noexcept { return n * alpha; }

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

// Layout of the d x alpha message matrix M: M(r, c) = X[L(r, c)], where
// data blocks are numbered from 1 and 0 marks a structural zero.
class IndexMatrix {
 public:
  IndexMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint32_t operator()(std::size_t r, std::size_t c) const noexcept {
    return values_[r * cols_ + c];
  }
  std::uint32_t& operator()(std::size_t r, std::size_t c) noexcept {
    return values_[r * cols_ + c];
  }

  // Throws InvalidConstruction when the layout breaks the variant's
  // invariants (see msr_index_matrix / mbr_index_matrix).
  void check(const CodeParams& params) const;

  friend bool operator==(const IndexMatrix&, const IndexMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint32_t> values_;
};

// Two stacked alpha x alpha symmetric blocks S1 (values 1..a(a+1)/2) and S2
// (the next a(a+1)/2 values), each numbered along the upper triangle in
// row-major order and mirrored.
IndexMatrix msr_index_matrix(const CodeParams& params);
// d x d symmetric [[S, T], [T^t, 0]] with S numbered like the MSR blocks and
// T (k x (d-k)) numbered row-major after S.
IndexMatrix mbr_index_matrix(const CodeParams& params);
IndexMatrix index_matrix(const CodeParams& params);

// Encoding matrix Psi (n x d) of a product-matrix code.
//
// MSR codes have Psi = [Phi | Lambda Phi] with Phi n x alpha and Lambda a
// diagonal stored in `lambda`. MBR codes built here are systematic:
// the first k rows of Psi are [I_k | 0].
struct CodeMatrices {
  CodeParams params;
  Construction construction = Construction::Vanilla;
  Matrix psi;
  std::vector<Element> lambda;  // MSR only

  const Field& field() const noexcept { return psi.field(); }
  // MSR: first alpha columns of Psi. MBR: first k columns.
  Matrix phi() const;
};

// MSR: Psi(i, j) = g^(i*j) (0-based) and lambda_i = g^(i*alpha).
// MBR: first k rows [I_k | 0]; rows i >= k form the Cauchy matrix
// 1 / (g^(d+i+1) - g^j). Throws InvalidConstruction if the field is too
// small for distinct evaluation points.
CodeMatrices build_vanilla(const CodeParams& params, const Field& field);

// MSR only. Phi is I_alpha stacked on a Cauchy block
// Phi(i, j) = 1 / (g^(i+alpha+1) - g^j) and
// lambda_i = (g^(i+alpha+1) - 1) / (g^(i+alpha+1) - g^alpha), 0-based i, j.
// With `enforce_range`, k must lie in the computationally validated range
// (2..39 for GF(2^8), 2..64 for GF(2^16)) and any n other than 2k-1 must
// pass validate_construction, else InvalidConstruction.
CodeMatrices build_sparse(const CodeParams& params, const Field& field, bool enforce_range = true);

CodeMatrices build_code(const CodeParams& params, Construction construction, const Field& field);

// Largest k for which the sparse construction is known valid in GF(2^w).
std::size_t sparse_max_k(unsigned width);

struct ValidationOptions {
  // Subset families larger than this are not enumerated.
  std::size_t exhaustive_limit = 1'000'000;
  // When set, oversized families are checked on this many random subsets.
  std::optional<std::size_t> samples;
  // Accept a Cauchy / Vandermonde certificate for oversized families when
  // the matrix provably has that structure with distinct points.
  bool allow_structural = true;
  std::uint64_t seed = 0;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string method;                // "exhaustive", "sampled(N)", "structural", "direct"
  std::vector<std::size_t> witness;  // 0-based rows (or lambda indices) of a failure
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool overall = false;

  const ValidationCheck* find(std::string_view name) const noexcept;
};

// Checks the product-matrix constraints:
//   psi_structure        MSR: Psi = [Phi | Lambda Phi]; MBR: first k rows [I_k | 0]
//   psi_rows_independent every d rows of Psi are linearly independent
//   phi_rows_independent every alpha (MSR) / k (MBR) rows of Phi are independent
//   lambda_distinct      MSR only
// Throws InvalidArgument when a family exceeds options.exhaustive_limit and
// neither sampling nor a structural certificate is available.
ValidationReport validate_construction(const CodeMatrices& code,
                                       const ValidationOptions& options = {});

// Binomial coefficient, saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k) noexcept;

}  // namespace pmrc
