#pragma once

#include <cstdint>

// Process-wide instrumentation counters. Used by tests and the benchmark
// harness to observe what work an apply phase performs (for example, that
// encoding with a precomputed generator never inverts a matrix).
namespace pmrc::stats {

struct Counters {
  std::uint64_t matrix_inversions = 0;
  std::uint64_t region_multiplies = 0;  // region ops with a coefficient other than 0/1
  std::uint64_t region_xors = 0;        // region ops with coefficient 1
};

Counters snapshot() noexcept;
void reset() noexcept;

void count_inversion() noexcept;
void count_region_multiply() noexcept;
void count_region_xor() noexcept;

}  // namespace pmrc::stats
