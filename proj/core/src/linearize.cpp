#include "pmrc/linearize.hpp"

#include <numeric>
#include <vector>

#include "pmrc/error.hpp"

namespace pmrc {

Matrix GeneratorMatrix::parity() const {
  if (!systematic) return g;
  std::vector<std::size_t> rows(g.rows() - params.data_blocks);
  std::iota(rows.begin(), rows.end(), params.data_blocks);
  return select_rows(g, rows);
}

GeneratorMatrix generator_from_pm(const CodeMatrices& code, const IndexMatrix& index) {
  const CodeParams& p = code.params;
  if (code.psi.rows() != p.n || code.psi.cols() != p.d || index.rows() != p.d ||
      index.cols() != p.alpha) {
    throw InvalidArgument("Psi / index matrix shapes do not match the code parameters");
  }
  Matrix g(code.field(), p.n * p.alpha, p.data_blocks);
  for (std::size_t i = 0; i < p.n; ++i) {
    for (std::size_t j = 0; j < p.alpha; ++j) {
      const std::size_t row = p.alpha * i + j;
      for (std::size_t l = 0; l < p.d; ++l) {
        const std::uint32_t block = index(l, j);
        if (block != 0) g(row, block - 1) = code.psi(i, l);
      }
    }
  }
  return GeneratorMatrix{std::move(g), false, p};
}

GeneratorMatrix systematize(const GeneratorMatrix& gm) {
  const std::size_t b = gm.params.data_blocks;
  std::vector<std::size_t> top(b);
  std::iota(top.begin(), top.end(), std::size_t{0});
  Matrix inverse(gm.g.field(), 0, 0);
  try {
    inverse = invert(select_rows(gm.g, top));
  } catch (const SingularMatrix& e) {
    throw InvalidConstruction(std::string("cannot systematize: top B rows are singular (") +
                              e.what() + ")");
  }
  return GeneratorMatrix{multiply(gm.g, inverse), true, gm.params};
}

int Sparsity::reported() const noexcept {
  if (entries == 0) return 0;
  // nearest integer with ties toward zero, in exact integer arithmetic
  const std::uint64_t scaled = 200 * zeros;  // 2 * 100 * zeros
  const std::uint64_t q = scaled / (2 * entries);
  const std::uint64_t rem = scaled - q * 2 * entries;
  return static_cast<int>(rem > entries ? q + 1 : q);
}

Sparsity sparsity(const GeneratorMatrix& gm) {
  const Matrix m = gm.parity();
  return Sparsity{m.count_zeros(), static_cast<std::uint64_t>(m.rows()) * m.cols()};
}

int sparsity_percent(const GeneratorMatrix& gm) { return sparsity(gm).reported(); }

}  // namespace pmrc
