#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmrc/pm_construct.hpp"

namespace pmrc {

enum class BenchOp : std::uint8_t { Encode, Decode, Repair };
// Specific: the product-matrix algorithms. Linear: the generator-matrix
// form. ReedSolomon: a systematic Vandermonde RS baseline with the same
// (n, k) and per-node storage, included for ratio context only.
enum class BenchMethod : std::uint8_t { Specific, Linear, ReedSolomon };

std::string_view to_string(BenchOp op) noexcept;
std::string_view to_string(BenchMethod m) noexcept;
BenchOp parse_bench_op(std::string_view s);
BenchMethod parse_bench_method(std::string_view s);

struct BenchCode {
  CodeParams params;
  Construction construction = Construction::Sparse;
  unsigned width = 8;
  bool systematic = true;
  BenchMethod method = BenchMethod::Linear;

  // e.g. "msr/sparse/linear/sys n=15 k=8 d=14 w=8"
  std::string describe() const;
};

struct BenchOptions {
  std::uint64_t seed = 1;
  // Decode: erase exactly this many nodes instead of sampling 1..n-k.
  std::optional<std::size_t> failures;
};

struct BenchResult {
  BenchOp op = BenchOp::Encode;
  BenchCode code;
  std::size_t block_size = 0;
  std::size_t runs = 0;
  // Matrix builds and inversions, averaged over the number of times they ran
  // (once for encode, once per sampled pattern for decode and repair).
  double init_time = 0.0;
  double apply_time = 0.0;  // mean seconds per run
  // Bytes per stripe (B blocks for encode/decode, alpha for repair) over
  // the mean apply time, in 10^6 bytes per second.
  double throughput = 0.0;
  std::uint64_t apply_inversions = 0;
  // Decode: number of erased nodes -> runs. Repair: failed node -> runs.
  std::map<std::size_t, std::size_t> pattern_counts;

  std::string pattern_summary() const;
};

// Runs the operation `runs` times on one stripe of random data. All
// randomness derives from options.seed. Throws InvalidArgument for
// runs == 0, a misaligned block size, or a combination the method does not
// support (systematic specific MBR is native, so it is accepted).
BenchResult run_bench(BenchOp op, const BenchCode& code, std::size_t block_size,
                      std::size_t runs, const BenchOptions& options = {});

std::vector<BenchResult> sweep_block_size(BenchOp op, const BenchCode& code,
                                          std::span<const std::size_t> sizes, std::size_t runs,
                                          const BenchOptions& options = {});

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const BenchResult& r);
void write_csv(std::ostream& out, std::span<const BenchResult> results);

struct SparsityRow {
  std::size_t k = 0;
  int vanilla = 0;
  int sparse = 0;
  int vanilla_systematic = 0;
  int sparse_systematic = 0;
  double exact[4] = {};  // same order, unrounded
};

// MSR family n = 2k-1 in GF(2^width).
std::vector<SparsityRow> sparsity_report(std::span<const std::size_t> ks, unsigned width = 8);
void write_sparsity_table(std::ostream& out, std::span<const SparsityRow> rows);

}  // namespace pmrc
