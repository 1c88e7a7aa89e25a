#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>

namespace pmrc {

// A symbol of GF(2^8) or GF(2^16). Only the low `width` bits are used.
using Element = std::uint16_t;

// Arithmetic context for GF(2^w), w in {8, 16}.
//
// Elements use the polynomial basis modulo a primitive polynomial
// (0x11D for w=8, 0x1100B for w=16) with generator g = 2. Instances are
// immutable handles onto shared tables; copying is cheap and thread safe.
// In byte buffers, w=16 symbols are little-endian byte pairs.
class Field {
 public:
  // Throws Unsupported for widths other than 8 and 16. Construction
  // verifies by enumeration that g has multiplicative order 2^w - 1,
  // which also proves the polynomial irreducible.
  static Field make(unsigned width);

  unsigned width() const noexcept;
  std::uint32_t polynomial() const noexcept;
  Element generator() const noexcept { return 2; }
  // Size of the multiplicative group, 2^w - 1.
  std::uint32_t order() const noexcept;
  std::size_t symbol_bytes() const noexcept { return width() / 8; }

  bool contains(std::uint32_t value) const noexcept { return value <= order(); }

  static constexpr Element add(Element a, Element b) noexcept {
    return static_cast<Element>(a ^ b);
  }
  static constexpr Element sub(Element a, Element b) noexcept { return add(a, b); }

  Element mul(Element a, Element b) const noexcept;
  Element div(Element a, Element b) const;  // throws DivisionByZero
  Element inv(Element a) const;             // throws DivisionByZero
  // g^e, exponent reduced mod 2^w - 1.
  Element exp(std::uint64_t e) const noexcept;
  // Discrete log base g; throws DivisionByZero for 0.
  std::uint32_t log(Element a) const;

  // dst ^= c * src, symbol-wise. Buffers must have equal length, a multiple
  // of symbol_bytes(). Bit-exact with a scalar loop of mul/add.
  void region_madd(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src,
                   Element c) const;
  // dst = c * src.
  void region_mul(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src,
                  Element c) const;

  friend bool operator==(const Field& a, const Field& b) noexcept {
    return a.width() == b.width();
  }

  struct Tables;

 private:
  explicit Field(std::shared_ptr<const Tables> tables) : tables_(std::move(tables)) {}

  void check_region(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) const;

  std::shared_ptr<const Tables> tables_;
};

// dst ^= src.
void region_xor(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src);

// Name of the region kernel selected at runtime ("avx2", "ssse3", "scalar").
const char* region_kernel_name() noexcept;

}  // namespace pmrc
