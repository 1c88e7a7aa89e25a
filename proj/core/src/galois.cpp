#include "pmrc/galois.hpp"

#include <array>
#include <cstring>
#include <string>
#include <vector>

#include "pmrc/error.hpp"
#include "pmrc/stats.hpp"
#include "region_kernels.hpp"

namespace pmrc {

struct Field::Tables {
  unsigned width = 0;
  std::uint32_t polynomial = 0;
  std::uint32_t order = 0;
  // exp has 2*order entries so log sums never need a modulo.
  std::vector<Element> exp;
  std::vector<std::uint32_t> log;
  // w=8 only: full product table and per-constant nibble tables.
  std::vector<std::uint8_t> mul8;
  std::vector<std::uint8_t> nibble_lo8;
  std::vector<std::uint8_t> nibble_hi8;
};

namespace {

constexpr std::uint32_t kPoly8 = 0x11D;
constexpr std::uint32_t kPoly16 = 0x1100B;

std::shared_ptr<const Field::Tables> build_tables(unsigned width, std::uint32_t poly) {
  auto t = std::make_shared<Field::Tables>();
  t->width = width;
  t->polynomial = poly;
  const std::uint32_t size = 1u << width;
  t->order = size - 1;
  t->exp.assign(2 * static_cast<std::size_t>(t->order), 0);
  t->log.assign(size, 0);

  // Walk powers of g = x. Every nonzero element must be hit exactly once
  // before returning to 1; otherwise g is not primitive (or the polynomial
  // is reducible).
  std::vector<bool> seen(size, false);
  std::uint32_t value = 1;
  for (std::uint32_t e = 0; e < t->order; ++e) {
    if (value == 0 || value >= size || seen[value]) {
      throw InvalidConstruction("polynomial 0x" + std::to_string(poly) +
                                " is not primitive for width " + std::to_string(width));
    }
    seen[value] = true;
    t->exp[e] = static_cast<Element>(value);
    t->exp[e + t->order] = static_cast<Element>(value);
    t->log[value] = e;
    value <<= 1;
    if (value & size) value ^= poly;
  }
  if (value != 1) {
    throw InvalidConstruction("generator order mismatch for width " + std::to_string(width));
  }

  if (width == 8) {
    auto mul = [&](std::uint32_t a, std::uint32_t b) -> std::uint8_t {
      if (a == 0 || b == 0) return 0;
      return static_cast<std::uint8_t>(t->exp[t->log[a] + t->log[b]]);
    };
    t->mul8.resize(256 * 256);
    t->nibble_lo8.resize(256 * 16);
    t->nibble_hi8.resize(256 * 16);
    for (std::uint32_t c = 0; c < 256; ++c) {
      for (std::uint32_t v = 0; v < 256; ++v) t->mul8[c * 256 + v] = mul(c, v);
      for (std::uint32_t v = 0; v < 16; ++v) {
        t->nibble_lo8[c * 16 + v] = mul(c, v);
        t->nibble_hi8[c * 16 + v] = mul(c, v << 4);
      }
    }
  }
  return t;
}

void scalar_mul8(std::uint8_t* dst, const std::uint8_t* src, std::size_t len,
                 const std::uint8_t* row, bool accumulate) {
  if (accumulate) {
    for (std::size_t i = 0; i < len; ++i) dst[i] ^= row[src[i]];
  } else {
    for (std::size_t i = 0; i < len; ++i) dst[i] = row[src[i]];
  }
}

}  // namespace

Field Field::make(unsigned width) {
  static const std::shared_ptr<const Tables> t8 = build_tables(8, kPoly8);
  static const std::shared_ptr<const Tables> t16 = build_tables(16, kPoly16);
  switch (width) {
    case 8:
      return Field(t8);
    case 16:
      return Field(t16);
    default:
      throw Unsupported("unsupported field width " + std::to_string(width) +
                        " (expected 8 or 16)");
  }
}

unsigned Field::width() const noexcept { return tables_->width; }
std::uint32_t Field::polynomial() const noexcept { return tables_->polynomial; }
std::uint32_t Field::order() const noexcept { return tables_->order; }

Element Field::mul(Element a, Element b) const noexcept {
  if (a == 0 || b == 0) return 0;
  return tables_->exp[tables_->log[a] + tables_->log[b]];
}

Element Field::div(Element a, Element b) const {
  if (b == 0) throw DivisionByZero();
  if (a == 0) return 0;
  return tables_->exp[tables_->log[a] + tables_->order - tables_->log[b]];
}

Element Field::inv(Element a) const { return div(1, a); }

Element Field::exp(std::uint64_t e) const noexcept {
  return tables_->exp[static_cast<std::size_t>(e % tables_->order)];
}

std::uint32_t Field::log(Element a) const {
  if (a == 0) throw DivisionByZero();
  return tables_->log[a];
}

void Field::check_region(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) const {
  if (dst.size() != src.size()) {
    throw InvalidArgument("region length mismatch: " + std::to_string(dst.size()) + " vs " +
                          std::to_string(src.size()));
  }
  if (dst.size() % symbol_bytes() != 0) {
    throw InvalidArgument("region length " + std::to_string(dst.size()) +
                          " is not a multiple of the symbol size");
  }
}

namespace {

void mul_region(const Field& field, const Field::Tables& t, std::uint8_t* dst,
                const std::uint8_t* src, std::size_t len, Element c, bool accumulate) {
  using detail::RegionKernel;
  const RegionKernel kernel = detail::active_region_kernel();
  std::size_t done = 0;
  if (t.width == 8) {
    const std::uint8_t* lo = &t.nibble_lo8[c * 16u];
    const std::uint8_t* hi = &t.nibble_hi8[c * 16u];
    if (kernel == RegionKernel::Avx2) {
      done = detail::mul8_avx2(dst, src, len, lo, hi, accumulate);
    } else if (kernel == RegionKernel::Ssse3) {
      done = detail::mul8_ssse3(dst, src, len, lo, hi, accumulate);
    }
    scalar_mul8(dst + done, src + done, len - done, &t.mul8[c * 256u], accumulate);
    return;
  }

  if (kernel != RegionKernel::Scalar && len >= 32) {
    std::uint8_t tables[8][16];
    for (unsigned p = 0; p < 4; ++p) {
      for (unsigned v = 0; v < 16; ++v) {
        const Element prod = field.mul(c, static_cast<Element>(v << (4 * p)));
        tables[2 * p][v] = static_cast<std::uint8_t>(prod & 0xff);
        tables[2 * p + 1][v] = static_cast<std::uint8_t>(prod >> 8);
      }
    }
    done = kernel == RegionKernel::Avx2 ? detail::mul16_avx2(dst, src, len, tables, accumulate)
                                        : detail::mul16_ssse3(dst, src, len, tables, accumulate);
  }
  const std::uint32_t log_c = t.log[c];
  for (std::size_t i = done; i < len; i += 2) {
    const Element s = static_cast<Element>(src[i] | (src[i + 1] << 8));
    Element p = s == 0 ? Element{0} : t.exp[log_c + t.log[s]];
    if (accumulate) p ^= static_cast<Element>(dst[i] | (dst[i + 1] << 8));
    dst[i] = static_cast<std::uint8_t>(p & 0xff);
    dst[i + 1] = static_cast<std::uint8_t>(p >> 8);
  }
}

}  // namespace

void Field::region_madd(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src,
                        Element c) const {
  check_region(dst, src);
  if (c == 0) return;
  if (c == 1) {
    region_xor(dst, src);
    return;
  }
  stats::count_region_multiply();
  mul_region(*this, *tables_, dst.data(), src.data(), dst.size(), c, true);
}

void Field::region_mul(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src,
                       Element c) const {
  check_region(dst, src);
  if (c == 0) {
    std::memset(dst.data(), 0, dst.size());
    return;
  }
  if (c == 1) {
    if (dst.data() != src.data()) std::memcpy(dst.data(), src.data(), dst.size());
    return;
  }
  stats::count_region_multiply();
  mul_region(*this, *tables_, dst.data(), src.data(), dst.size(), c, false);
}

void region_xor(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) {
  if (dst.size() != src.size()) {
    throw InvalidArgument("region length mismatch: " + std::to_string(dst.size()) + " vs " +
                          std::to_string(src.size()));
  }
  stats::count_region_xor();
  std::size_t done = 0;
  if (detail::active_region_kernel() == detail::RegionKernel::Avx2) {
    done = detail::xor_avx2(dst.data(), src.data(), dst.size());
  }
  for (std::size_t i = done; i < dst.size(); ++i) dst[i] ^= src[i];
}

const char* region_kernel_name() noexcept {
  switch (detail::active_region_kernel()) {
    case detail::RegionKernel::Avx2:
      return "avx2";
    case detail::RegionKernel::Ssse3:
      return "ssse3";
    case detail::RegionKernel::Scalar:
      break;
  }
  return "scalar";
}

}  // namespace pmrc
