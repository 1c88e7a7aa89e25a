#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pmrc/blocks.hpp"
#include "pmrc/code_file.hpp"
#include "pmrc/linearize.hpp"

namespace pmrc {

// ---------------------------------------------------------------------------
// Encoding

// C = Psi * M(x), computed directly from Psi and L. Zero entries of Psi and
// structural zeros of M are skipped. Throws InvalidArgument unless x holds B
// symbol-aligned blocks.
std::vector<Share> encode_specific(const CodeDefinition& code, const BlockVector& x);
// Only the listed nodes, in the given order.
std::vector<Share> encode_specific(const CodeDefinition& code, const BlockVector& x,
                                   std::span<const std::size_t> nodes);
// Fills preallocated shares (alpha blocks of x's block size), each for the
// node recorded in it.
void encode_specific_into(const CodeDefinition& code, const BlockVector& x,
                          std::span<Share> shares);

// Y = G x with the generator's zero coefficients skipped.
class LinearEncoder {
 public:
  explicit LinearEncoder(const GeneratorMatrix& gm);

  const CodeParams& params() const noexcept { return params_; }
  bool systematic() const noexcept { return systematic_; }
  // Field multiplications per block-column of a stripe.
  std::size_t multiplies() const noexcept { return map_.multiplies(); }

  std::vector<Share> encode(const BlockVector& x) const;
  // `shares` must hold n shares of alpha blocks with x's block size.
  void encode_into(const BlockVector& x, std::span<Share> shares) const;
  // Systematic generators only: fills nodes k.. and leaves 0..k-1 untouched.
  void encode_parity_into(const BlockVector& x, std::span<Share> shares) const;

 private:
  CodeParams params_;
  bool systematic_;
  LinearMap map_;
  std::optional<LinearMap> parity_map_;
};

std::vector<Share> encode_linear(const GeneratorMatrix& gm, const BlockVector& x);

// MSR: the message Z whose encoding stores x verbatim on nodes 0..k-1,
// obtained by running the MSR decoder on x laid out as those k shares.
BlockVector precode_systematic_specific(const CodeDefinition& code, const BlockVector& x);

// Systematic encoding through the specific algorithms: MSR precodes then
// encodes, MBR (systematic by construction) encodes directly. Nodes 0..k-1
// hold x verbatim for MSR.
std::vector<Share> encode_systematic_specific(const CodeDefinition& code, const BlockVector& x);

// ---------------------------------------------------------------------------
// Decoding

// Generic decoder for the linearized code. Initialization picks B
// independent rows of G among the available nodes (unit rows first, then
// lowest-indexed rows, dropping dependent ones) and inverts them once;
// decode() computes only the wanted blocks.
class LinearDecoder {
 public:
  // `wanted` are 0-based data block indices; empty means all B.
  // Throws Unrecoverable when fewer than B independent rows are available.
  LinearDecoder(const GeneratorMatrix& gm, std::span<const std::size_t> available_nodes,
                std::span<const std::size_t> wanted = {});

  const std::vector<std::size_t>& selected_rows() const noexcept { return rows_; }
  const std::vector<std::size_t>& wanted() const noexcept { return wanted_; }
  std::size_t multiplies() const noexcept { return map_.multiplies(); }

  // Blocks in the order of wanted(). Shares may come in any order and may
  // include extra nodes.
  BlockVector decode(std::span<const Share> shares) const;

 private:
  CodeParams params_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> wanted_;
  LinearMap map_;
};

BlockVector decode_linear(const GeneratorMatrix& gm, std::span<const Share> shares,
                          std::span<const std::size_t> wanted = {});

// Product-matrix MSR decoder from exactly k shares. With A = C_DC Phi_DC^t
// = P + Lambda_DC Q (P, Q symmetric), the off-diagonal entries of P and Q
// are separated using the distinct lambdas; alpha of the columns
// S phi_i^t are recovered by alpha x alpha inversions and S1, S2 follow.
// Returns the message (X, or Z for a systematic code).
class MsrDecoder {
 public:
  // Throws InvalidArgument on duplicate nodes / wrong count and
  // InvalidConstruction on a lambda collision or singular Phi block.
  MsrDecoder(const CodeDefinition& code, std::span<const std::size_t> nodes);

  const std::vector<std::size_t>& nodes() const noexcept { return nodes_; }
  BlockVector decode(std::span<const Share> shares) const;

 private:
  CodeDefinition code_;
  std::vector<std::size_t> nodes_;
  Matrix phi_dc_;                    // k x alpha
  LinearMap phi_map_;                // C_i -> (C_i . phi_j)_j
  std::vector<Element> pair_inv_;    // 1 / (lambda_i - lambda_j), i < j
  std::vector<LinearMap> columns_;   // per selected node: alpha x alpha inverse
  LinearMap assemble_;               // alpha x alpha, right-multiplies by (Phi_sel^t)^-1
};

// Product-matrix MBR decoder from exactly k shares:
// T = Phi_DC^-1 R_right, S = Phi_DC^-1 (R_left - Delta_DC T^t).
class MbrDecoder {
 public:
  MbrDecoder(const CodeDefinition& code, std::span<const std::size_t> nodes);

  const std::vector<std::size_t>& nodes() const noexcept { return nodes_; }
  BlockVector decode(std::span<const Share> shares) const;

 private:
  CodeDefinition code_;
  std::vector<std::size_t> nodes_;
  LinearMap phi_inv_;  // k x k
  Matrix delta_;       // k x (d-k)
};

BlockVector decode_msr_specific(const CodeDefinition& code, std::span<const Share> shares);
BlockVector decode_mbr_specific(const CodeDefinition& code, std::span<const Share> shares);

// Recovers x with the variant's specific decoder from any k available
// nodes, preferring systematic ones. For a systematic MSR code the decoded
// message is re-encoded onto the missing nodes among 0..k-1; when all of
// them survive, decode() is a plain copy.
class SpecificDecoder {
 public:
  // Throws Unrecoverable with fewer than k available nodes.
  SpecificDecoder(const CodeDefinition& code, std::span<const std::size_t> available,
                  bool systematic);

  const std::vector<std::size_t>& nodes() const noexcept { return chosen_; }
  BlockVector decode(std::span<const Share> shares) const;

 private:
  CodeDefinition code_;
  bool systematic_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> missing_systematic_;
  std::optional<MsrDecoder> msr_;
  std::optional<MbrDecoder> mbr_;
};

BlockVector decode_specific(const CodeDefinition& code, std::span<const Share> shares,
                            bool systematic);

// ---------------------------------------------------------------------------
// Repair

// mu is the failed node's Phi row (MSR) or Psi row (MBR). Every helper reads
// exactly the blocks whose mu coefficient is nonzero.
struct RepairPlan {
  std::size_t failed = 0;
  std::vector<std::size_t> helpers;
  std::vector<Element> mu;
  std::vector<std::size_t> reads_per_helper;
};

// Default helpers: the d lowest-indexed nodes other than `failed`.
RepairPlan make_repair_plan(const CodeMatrices& code, std::size_t failed,
                            std::optional<std::vector<std::size_t>> helpers = std::nullopt);

struct RepairSymbol {
  std::size_t helper = 0;
  std::vector<std::uint8_t> block;
  std::size_t blocks_read = 0;
};

// Helper side: dot product of the helper's blocks with mu.
RepairSymbol repair_helper(const Field& field, const Share& helper, const RepairPlan& plan);

// Newcomer side. Initialization inverts Psi restricted to the helpers once;
// collect() can then be applied to any number of stripes.
class RepairCollector {
 public:
  RepairCollector(const CodeMatrices& code, const RepairPlan& plan);

  // symbols[i] comes from plan.helpers[i].
  Share collect(std::span<const std::span<const std::uint8_t>> symbols) const;
  Share collect(std::span<const RepairSymbol> symbols) const;

 private:
  std::size_t failed_;
  std::vector<std::size_t> helpers_;
  LinearMap map_;
};

Share repair_collect(const CodeMatrices& code, const RepairPlan& plan,
                     std::span<const RepairSymbol> symbols);

struct RepairReadCost {
  std::size_t failed = 0;
  std::size_t blocks_per_helper = 0;
  std::size_t stored_per_helper = 0;  // alpha
  double read_fraction() const noexcept {
    return static_cast<double>(blocks_per_helper) / static_cast<double>(stored_per_helper);
  }
};

RepairReadCost repair_read_cost(const CodeMatrices& code, std::size_t failed);

struct RepairCostSummary {
  std::vector<RepairReadCost> per_node;
  // Sum of per-failure read reductions divided by 2k-2.
  double reduction_headline = 0.0;
  // Same sum averaged uniformly over all n nodes.
  double reduction_uniform = 0.0;
};

RepairCostSummary repair_cost_summary(const CodeMatrices& code);

}  // namespace pmrc
