#pragma once

#include <cstdint>

#include "pmrc/gf_matrix.hpp"
#include "pmrc/pm_construct.hpp"

namespace pmrc {

// Generator matrix (n*alpha x B) of the linear code equivalent to a
// product-matrix code. Row alpha*i + j (0-based node i, slot j) produces
// block j of node i.
struct GeneratorMatrix {
  Matrix g;
  bool systematic = false;
  CodeParams params;

  // Rows B.. of a systematic generator (G''); the whole matrix otherwise.
  Matrix parity() const;
};

// G(alpha*i + j, L(l, j) - 1) = Psi(i, l) for every l with L(l, j) != 0.
GeneratorMatrix generator_from_pm(const CodeMatrices& code, const IndexMatrix& index);

// G' = G * inverse(top B rows of G). Throws InvalidConstruction when the top
// rows are singular (e.g. MBR, whose first k nodes repeat data blocks).
GeneratorMatrix systematize(const GeneratorMatrix& gm);

struct Sparsity {
  std::uint64_t zeros = 0;
  std::uint64_t entries = 0;

  double percent() const noexcept {
    return entries == 0 ? 0.0 : 100.0 * static_cast<double>(zeros) / static_cast<double>(entries);
  }
  // Integer percentage rounded to nearest, ties toward zero
  // (87.5 -> 87, 92.74 -> 93).
  int reported() const noexcept;
};

// Measured on G for non-systematic generators and on G'' for systematic ones.
Sparsity sparsity(const GeneratorMatrix& gm);
int sparsity_percent(const GeneratorMatrix& gm);

}  // namespace pmrc
