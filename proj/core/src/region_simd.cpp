#include "region_kernels.hpp"

#include <atomic>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define PMRC_X86 1
#endif

namespace pmrc::detail {

#ifdef PMRC_X86

__attribute__((target("ssse3"))) std::size_t mul8_ssse3(std::uint8_t* dst,
                                                         const std::uint8_t* src,
                                                         std::size_t len,
                                                         const std::uint8_t* lo,
                                                         const std::uint8_t* hi,
                                                         bool accumulate) {
  const __m128i tlo = _mm_loadu_si128(reinterpret_cast<const __m128i*>(lo));
  const __m128i thi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(hi));
  const __m128i mask = _mm_set1_epi8(0x0f);
  std::size_t i = 0;
  for (; i + 16 <= len; i += 16) {
    const __m128i s = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i));
    const __m128i l = _mm_and_si128(s, mask);
    const __m128i h = _mm_and_si128(_mm_srli_epi64(s, 4), mask);
    __m128i p = _mm_xor_si128(_mm_shuffle_epi8(tlo, l), _mm_shuffle_epi8(thi, h));
    if (accumulate) {
      p = _mm_xor_si128(p, _mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + i)));
    }
    _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + i), p);
  }
  return i;
}

__attribute__((target("avx2"))) std::size_t mul8_avx2(std::uint8_t* dst,
                                                       const std::uint8_t* src,
                                                       std::size_t len,
                                                       const std::uint8_t* lo,
                                                       const std::uint8_t* hi,
                                                       bool accumulate) {
  const __m256i tlo =
      _mm256_broadcastsi128_si256(_mm_loadu_si128(reinterpret_cast<const __m128i*>(lo)));
  const __m256i thi =
      _mm256_broadcastsi128_si256(_mm_loadu_si128(reinterpret_cast<const __m128i*>(hi)));
  const __m256i mask = _mm256_set1_epi8(0x0f);
  std::size_t i = 0;
  // unrolled to a cache line
  for (; i + 64 <= len; i += 64) {
    const __m256i s0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    const __m256i s1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i + 32));
    __m256i p0 = _mm256_xor_si256(
        _mm256_shuffle_epi8(tlo, _mm256_and_si256(s0, mask)),
        _mm256_shuffle_epi8(thi, _mm256_and_si256(_mm256_srli_epi64(s0, 4), mask)));
    __m256i p1 = _mm256_xor_si256(
        _mm256_shuffle_epi8(tlo, _mm256_and_si256(s1, mask)),
        _mm256_shuffle_epi8(thi, _mm256_and_si256(_mm256_srli_epi64(s1, 4), mask)));
    if (accumulate) {
      p0 = _mm256_xor_si256(p0, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i)));
      p1 = _mm256_xor_si256(p1,
                            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i + 32)));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), p0);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i + 32), p1);
  }
  for (; i + 32 <= len; i += 32) {
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    __m256i p = _mm256_xor_si256(
        _mm256_shuffle_epi8(tlo, _mm256_and_si256(s, mask)),
        _mm256_shuffle_epi8(thi, _mm256_and_si256(_mm256_srli_epi64(s, 4), mask)));
    if (accumulate) {
      p = _mm256_xor_si256(p, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i)));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), p);
  }
  return i;
}

// 16-bit symbols are split into a low-byte and a high-byte plane, each plane
// is looked up nibble by nibble, and the two product planes are interleaved
// back into little-endian pairs.
__attribute__((target("ssse3"))) std::size_t mul16_ssse3(std::uint8_t* dst,
                                                          const std::uint8_t* src,
                                                          std::size_t len,
                                                          const std::uint8_t (*tables)[16],
                                                          bool accumulate) {
  __m128i t[8];
  for (int p = 0; p < 8; ++p) {
    t[p] = _mm_loadu_si128(reinterpret_cast<const __m128i*>(tables[p]));
  }
  const __m128i mask = _mm_set1_epi8(0x0f);
  const __m128i deinterleave =
      _mm_setr_epi8(0, 2, 4, 6, 8, 10, 12, 14, 1, 3, 5, 7, 9, 11, 13, 15);
  std::size_t i = 0;
  for (; i + 32 <= len; i += 32) {
    __m128i a = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i));
    __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + i + 16));
    a = _mm_shuffle_epi8(a, deinterleave);
    b = _mm_shuffle_epi8(b, deinterleave);
    const __m128i lo = _mm_unpacklo_epi64(a, b);
    const __m128i hi = _mm_unpackhi_epi64(a, b);
    const __m128i n0 = _mm_and_si128(lo, mask);
    const __m128i n1 = _mm_and_si128(_mm_srli_epi64(lo, 4), mask);
    const __m128i n2 = _mm_and_si128(hi, mask);
    const __m128i n3 = _mm_and_si128(_mm_srli_epi64(hi, 4), mask);
    const __m128i plo = _mm_xor_si128(
        _mm_xor_si128(_mm_shuffle_epi8(t[0], n0), _mm_shuffle_epi8(t[2], n1)),
        _mm_xor_si128(_mm_shuffle_epi8(t[4], n2), _mm_shuffle_epi8(t[6], n3)));
    const __m128i phi = _mm_xor_si128(
        _mm_xor_si128(_mm_shuffle_epi8(t[1], n0), _mm_shuffle_epi8(t[3], n1)),
        _mm_xor_si128(_mm_shuffle_epi8(t[5], n2), _mm_shuffle_epi8(t[7], n3)));
    __m128i ra = _mm_unpacklo_epi8(plo, phi);
    __m128i rb = _mm_unpackhi_epi8(plo, phi);
    if (accumulate) {
      ra = _mm_xor_si128(ra, _mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + i)));
      rb = _mm_xor_si128(rb, _mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + i + 16)));
    }
    _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + i), ra);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + i + 16), rb);
  }
  return i;
}

__attribute__((target("avx2"))) std::size_t mul16_avx2(std::uint8_t* dst,
                                                        const std::uint8_t* src,
                                                        std::size_t len,
                                                        const std::uint8_t (*tables)[16],
                                                        bool accumulate) {
  __m256i t[8];
  for (int p = 0; p < 8; ++p) {
    t[p] = _mm256_broadcastsi128_si256(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(tables[p])));
  }
  const __m256i mask = _mm256_set1_epi8(0x0f);
  const __m256i deinterleave =
      _mm256_setr_epi8(0, 2, 4, 6, 8, 10, 12, 14, 1, 3, 5, 7, 9, 11, 13, 15,
                       0, 2, 4, 6, 8, 10, 12, 14, 1, 3, 5, 7, 9, 11, 13, 15);
  std::size_t i = 0;
  for (; i + 64 <= len; i += 64) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i + 32));
    a = _mm256_shuffle_epi8(a, deinterleave);
    b = _mm256_shuffle_epi8(b, deinterleave);
    // Per 128-bit lane, so lane order of a and b is preserved by the
    // matching unpack on the way out.
    const __m256i lo = _mm256_unpacklo_epi64(a, b);
    const __m256i hi = _mm256_unpackhi_epi64(a, b);
    const __m256i n0 = _mm256_and_si256(lo, mask);
    const __m256i n1 = _mm256_and_si256(_mm256_srli_epi64(lo, 4), mask);
    const __m256i n2 = _mm256_and_si256(hi, mask);
    const __m256i n3 = _mm256_and_si256(_mm256_srli_epi64(hi, 4), mask);
    const __m256i plo = _mm256_xor_si256(
        _mm256_xor_si256(_mm256_shuffle_epi8(t[0], n0), _mm256_shuffle_epi8(t[2], n1)),
        _mm256_xor_si256(_mm256_shuffle_epi8(t[4], n2), _mm256_shuffle_epi8(t[6], n3)));
    const __m256i phi = _mm256_xor_si256(
        _mm256_xor_si256(_mm256_shuffle_epi8(t[1], n0), _mm256_shuffle_epi8(t[3], n1)),
        _mm256_xor_si256(_mm256_shuffle_epi8(t[5], n2), _mm256_shuffle_epi8(t[7], n3)));
    __m256i ra = _mm256_unpacklo_epi8(plo, phi);
    __m256i rb = _mm256_unpackhi_epi8(plo, phi);
    if (accumulate) {
      ra = _mm256_xor_si256(ra, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i)));
      rb = _mm256_xor_si256(rb,
                            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i + 32)));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), ra);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i + 32), rb);
  }
  return i;
}

__attribute__((target("avx2"))) std::size_t xor_avx2(std::uint8_t* dst,
                                                      const std::uint8_t* src,
                                                      std::size_t len) {
  std::size_t i = 0;
  for (; i + 32 <= len; i += 32) {
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_xor_si256(s, d));
  }
  return i;
}

RegionKernel detected_region_kernel() noexcept {
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return RegionKernel::Avx2;
  if (__builtin_cpu_supports("ssse3")) return RegionKernel::Ssse3;
  return RegionKernel::Scalar;
}

#else

std::size_t mul8_ssse3(std::uint8_t*, const std::uint8_t*, std::size_t, const std::uint8_t*,
                       const std::uint8_t*, bool) {
  return 0;
}
std::size_t mul8_avx2(std::uint8_t*, const std::uint8_t*, std::size_t, const std::uint8_t*,
                      const std::uint8_t*, bool) {
  return 0;
}
std::size_t mul16_ssse3(std::uint8_t*, const std::uint8_t*, std::size_t,
                        const std::uint8_t (*)[16], bool) {
  return 0;
}
std::size_t mul16_avx2(std::uint8_t*, const std::uint8_t*, std::size_t,
                       const std::uint8_t (*)[16], bool) {
  return 0;
}
std::size_t xor_avx2(std::uint8_t*, const std::uint8_t*, std::size_t) { return 0; }

RegionKernel detected_region_kernel() noexcept { return RegionKernel::Scalar; }

#endif

namespace {

std::atomic<RegionKernel>& kernel_slot() noexcept {
  static std::atomic<RegionKernel> slot{detected_region_kernel()};
  return slot;
}

}  // namespace

RegionKernel active_region_kernel() noexcept {
  return kernel_slot().load(std::memory_order_relaxed);
}

bool force_region_kernel(RegionKernel kernel) noexcept {
  if (static_cast<int>(kernel) > static_cast<int>(detected_region_kernel())) return false;
  kernel_slot().store(kernel, std::memory_order_relaxed);
  return true;
}

}  // namespace pmrc::detail
