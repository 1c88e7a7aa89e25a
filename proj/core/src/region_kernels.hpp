#pragma once

// Internal SIMD split-table kernels for region multiply(-accumulate).
// Each kernel handles the largest prefix it can vectorize and returns the
// number of bytes processed; the caller finishes the tail with scalar code.

#include <cstddef>
#include <cstdint>

namespace pmrc::detail {

enum class RegionKernel { Scalar, Ssse3, Avx2 };

// Kernel chosen by CPU feature detection unless overridden.
RegionKernel active_region_kernel() noexcept;
// Testing hook; returns false if the CPU cannot run the requested kernel.
bool force_region_kernel(RegionKernel kernel) noexcept;
RegionKernel detected_region_kernel() noexcept;

// GF(2^8): lo[v] = c*v, hi[v] = c*(v<<4) for v in [0,16).
std::size_t mul8_ssse3(std::uint8_t* dst, const std::uint8_t* src, std::size_t len,
                       const std::uint8_t* lo, const std::uint8_t* hi, bool accumulate);
std::size_t mul8_avx2(std::uint8_t* dst, const std::uint8_t* src, std::size_t len,
                      const std::uint8_t* lo, const std::uint8_t* hi, bool accumulate);

// GF(2^16): tables[2p][v] / tables[2p+1][v] are the low / high product byte
// of c * (v << 4p), nibble position p in [0,4).
std::size_t mul16_ssse3(std::uint8_t* dst, const std::uint8_t* src, std::size_t len,
                        const std::uint8_t (*tables)[16], bool accumulate);
std::size_t mul16_avx2(std::uint8_t* dst, const std::uint8_t* src, std::size_t len,
                       const std::uint8_t (*tables)[16], bool accumulate);

std::size_t xor_avx2(std::uint8_t* dst, const std::uint8_t* src, std::size_t len);

}  // namespace pmrc::detail
