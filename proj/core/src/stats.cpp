#include "pmrc/stats.hpp"

#include <atomic>

namespace pmrc::stats {
namespace {

std::atomic<std::uint64_t> g_inversions{0};
std::atomic<std::uint64_t> g_multiplies{0};
std::atomic<std::uint64_t> g_xors{0};

}  // namespace

Counters snapshot() noexcept {
  return {g_inversions.load(std::memory_order_relaxed),
          g_multiplies.load(std::memory_order_relaxed),
          g_xors.load(std::memory_order_relaxed)};
}

void reset() noexcept {
  g_inversions.store(0, std::memory_order_relaxed);
  g_multiplies.store(0, std::memory_order_relaxed);
  g_xors.store(0, std::memory_order_relaxed);
}

void count_inversion() noexcept { g_inversions.fetch_add(1, std::memory_order_relaxed); }
void count_region_multiply() noexcept { g_multiplies.fetch_add(1, std::memory_order_relaxed); }
void count_region_xor() noexcept { g_xors.fetch_add(1, std::memory_order_relaxed); }

}  // namespace pmrc::stats
