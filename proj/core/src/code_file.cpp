#include "pmrc/code_file.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "pmrc/error.hpp"

namespace pmrc {

CodeDefinition make_code(const CodeParams& params, Construction construction, unsigned width) {
  const Field field = Field::make(width);
  return CodeDefinition{build_code(params, construction, field), index_matrix(params)};
}

void write_code_definition(std::ostream& out, const CodeDefinition& code) {
  const CodeParams& p = code.params();
  out << to_string(p.variant) << ' ' << to_string(code.matrices.construction) << ' '
      << code.field().width() << ' ' << p.n << ' ' << p.k << ' ' << p.d << '\n';
  write_text(out, code.matrices.psi);
  for (std::size_t r = 0; r < code.index.rows(); ++r) {
    for (std::size_t c = 0; c < code.index.cols(); ++c) {
      if (c) out << ' ';
      out << code.index(r, c);
    }
    out << '\n';
  }
}

CodeDefinition read_code_definition(std::istream& in) {
  std::string variant;
  std::string construction;
  unsigned width = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  if (!(in >> variant >> construction >> width >> n >> k >> d)) {
    throw FormatError("code definition header must be 'variant construction w n k d'");
  }
  const CodeParams params = CodeParams::make(n, k, d, parse_variant(variant));
  Matrix psi = read_text(in);
  if (psi.field().width() != width) throw FormatError("Psi field width disagrees with header");
  if (psi.rows() != n || psi.cols() != d) throw FormatError("Psi must be n x d");

  IndexMatrix index(params.d, params.alpha);
  for (std::size_t r = 0; r < index.rows(); ++r) {
    for (std::size_t c = 0; c < index.cols(); ++c) {
      std::int64_t v = -1;
      if (!(in >> v) || v < 0) throw FormatError("index matrix truncated or negative");
      index(r, c) = static_cast<std::uint32_t>(v);
    }
  }
  index.check(params);

  CodeMatrices matrices{params, parse_construction(construction), std::move(psi), {}};
  if (params.variant == Variant::Msr) {
    const Field& f = matrices.field();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = 0;
      while (j < params.alpha && matrices.psi(i, j) == 0) ++j;
      if (j == params.alpha) throw FormatError("Phi row " + std::to_string(i) + " is zero");
      matrices.lambda.push_back(f.div(matrices.psi(i, params.alpha + j), matrices.psi(i, j)));
    }
  }
  return CodeDefinition{std::move(matrices), std::move(index)};
}

void save_code_definition(const std::string& path, const CodeDefinition& code) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_code_definition(out, code);
  if (!out) throw Error("failed writing '" + path + "'");
}

CodeDefinition load_code_definition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_code_definition(in);
}

bool is_canonical(const CodeDefinition& code) {
  try {
    const CodeDefinition ref =
        make_code(code.params(), code.matrices.construction, code.field().width());
    return ref.matrices.psi == code.matrices.psi && ref.index == code.index;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace pmrc
