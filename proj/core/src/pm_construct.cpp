#include "pmrc/pm_construct.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "pmrc/error.hpp"

namespace pmrc {

std::string_view to_string(Variant v) noexcept { return v == Variant::Msr ? "msr" : "mbr"; }

std::string_view to_string(Construction c) noexcept {
  return c == Construction::Vanilla ? "vanilla" : "sparse";
}

Variant parse_variant(std::string_view s) {
  if (s == "msr") return Variant::Msr;
  if (s == "mbr") return Variant::Mbr;
  throw InvalidArgument("unknown variant '" + std::string(s) + "' (expected msr or mbr)");
}

Construction parse_construction(std::string_view s) {
  if (s == "vanilla") return Construction::Vanilla;
  if (s == "sparse") return Construction::Sparse;
  throw InvalidArgument("unknown construction '" + std::string(s) +
                        "' (expected vanilla or sparse)");
}

CodeParams CodeParams::make(std::size_t n, std::size_t k, std::size_t d, Variant variant) {
  if (k < 2) throw InvalidArgument("k must be at least 2");
  if (d < k) throw InvalidArgument("d must be at least k");
  if (n <= d) throw InvalidArgument("n must be greater than d");
  if (n > 0xFFFF) throw InvalidArgument("n must fit in 16 bits");
  CodeParams p;
  p.n = n;
  p.k = k;
  p.d = d;
  p.variant = variant;
  if (variant == Variant::Msr) {
    if (d != 2 * k - 2) {
      throw Unsupported("MSR codes require d = 2k-2 (got k=" + std::to_string(k) +
                        ", d=" + std::to_string(d) + ")");
    }
    p.alpha = d - k + 1;
    p.data_blocks = k * p.alpha;
  } else {
    p.alpha = d;
    p.data_blocks = k * (2 * d - k + 1) / 2;
  }
  return p;
}

IndexMatrix::IndexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0) {}

namespace {

// Fills the size x size symmetric block at (row0, col0) starting at `next`.
std::uint32_t fill_symmetric(IndexMatrix& l, std::size_t row0, std::size_t col0, std::size_t size,
                             std::uint32_t next) {
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = r; c < size; ++c) {
      l(row0 + r, col0 + c) = next;
      l(row0 + c, col0 + r) = next;
      ++next;
    }
  }
  return next;
}

bool symmetric_block(const IndexMatrix& l, std::size_t row0, std::size_t size) {
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      if (l(row0 + r, c) != l(row0 + c, r)) return false;
    }
  }
  return true;
}

}  // namespace

IndexMatrix msr_index_matrix(const CodeParams& params) {
  if (params.variant != Variant::Msr) throw InvalidArgument("msr_index_matrix needs an MSR code");
  const std::size_t a = params.alpha;
  IndexMatrix l(params.d, a);
  std::uint32_t next = fill_symmetric(l, 0, 0, a, 1);
  fill_symmetric(l, a, 0, a, next);
  return l;
}

IndexMatrix mbr_index_matrix(const CodeParams& params) {
  if (params.variant != Variant::Mbr) throw InvalidArgument("mbr_index_matrix needs an MBR code");
  const std::size_t k = params.k;
  const std::size_t d = params.d;
  IndexMatrix l(d, d);
  std::uint32_t next = fill_symmetric(l, 0, 0, k, 1);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = k; c < d; ++c) {
      l(r, c) = next;
      l(c, r) = next;
      ++next;
    }
  }
  return l;
}

IndexMatrix index_matrix(const CodeParams& params) {
  return params.variant == Variant::Msr ? msr_index_matrix(params) : mbr_index_matrix(params);
}

void IndexMatrix::check(const CodeParams& params) const {
  const std::size_t b = params.data_blocks;
  if (rows_ != params.d || cols_ != params.alpha) {
    throw InvalidConstruction("index matrix must be " + std::to_string(params.d) + "x" +
                              std::to_string(params.alpha));
  }
  std::vector<bool> seen(b + 1, false);
  for (std::uint32_t v : values_) {
    if (v > b) throw InvalidConstruction("index matrix value " + std::to_string(v) + " > B");
    seen[v] = true;
  }
  for (std::size_t v = 1; v <= b; ++v) {
    if (!seen[v]) throw InvalidConstruction("data block " + std::to_string(v) + " missing from L");
  }
  if (params.variant == Variant::Msr) {
    if (seen[0]) throw InvalidConstruction("MSR index matrix must not contain zeros");
    if (!symmetric_block(*this, 0, cols_) || !symmetric_block(*this, cols_, cols_)) {
      throw InvalidConstruction("MSR index matrix blocks must be symmetric");
    }
    for (std::size_t c = 0; c < cols_; ++c) {
      std::set<std::uint32_t> col;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (!col.insert((*this)(r, c)).second) {
          throw InvalidConstruction("duplicate value in index matrix column");
        }
      }
    }
  } else {
    if (!symmetric_block(*this, 0, rows_)) {
      throw InvalidConstruction("MBR index matrix must be symmetric");
    }
    for (std::size_t r = params.k; r < rows_; ++r) {
      for (std::size_t c = params.k; c < cols_; ++c) {
        if ((*this)(r, c) != 0) {
          throw InvalidConstruction("MBR index matrix must have a zero lower-right block");
        }
      }
    }
    for (std::size_t r = 0; r < params.k; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        if ((*this)(r, c) == 0) throw InvalidConstruction("unexpected zero in MBR index matrix");
      }
    }
  }
}

Matrix CodeMatrices::phi() const {
  const std::size_t cols = params.variant == Variant::Msr ? params.alpha : params.k;
  std::vector<std::size_t> idx(cols);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return select_cols(psi, idx);
}

namespace {

void require_distinct_points(const Field& f, const std::vector<std::uint64_t>& exponents,
                             const char* what) {
  std::set<std::uint64_t> reduced;
  for (std::uint64_t e : exponents) {
    if (!reduced.insert(e % f.order()).second) {
      throw InvalidConstruction(std::string("GF(2^") + std::to_string(f.width()) +
                                ") too small: " + what + " evaluation points collide");
    }
  }
}

}  // namespace

namespace {

CodeMatrices build_vanilla_unchecked(const CodeParams& params, const Field& field) {
  const std::size_t n = params.n;
  const std::size_t d = params.d;
  CodeMatrices cm{params, Construction::Vanilla, Matrix(field, n, d), {}};
  if (params.variant == Variant::Msr) {
    if (n > field.order()) {
      throw InvalidConstruction("GF(2^" + std::to_string(field.width()) + ") too small for n=" +
                                std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) cm.psi(i, j) = field.exp(std::uint64_t{i} * j);
      cm.lambda.push_back(field.exp(std::uint64_t{i} * params.alpha));
    }
    return cm;
  }

  const std::size_t k = params.k;
  std::vector<std::uint64_t> points;
  for (std::size_t j = 0; j < d; ++j) points.push_back(j);
  for (std::size_t i = k; i < n; ++i) points.push_back(d + i + 1);
  require_distinct_points(field, points, "MBR Cauchy");
  for (std::size_t i = 0; i < k; ++i) cm.psi(i, i) = 1;
  for (std::size_t i = k; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      cm.psi(i, j) = field.inv(Field::sub(field.exp(d + i + 1), field.exp(j)));
    }
  }
  return cm;
}

}  // namespace

CodeMatrices build_vanilla(const CodeParams& params, const Field& field) {
  CodeMatrices cm = build_vanilla_unchecked(params, field);
  if (params.variant == Variant::Msr) return cm;
  const ValidationReport report = validate_construction(cm);
  if (!report.overall) {
    throw InvalidConstruction("MBR Cauchy construction failed validation for n=" +
                              std::to_string(params.n) + ", k=" + std::to_string(params.k) +
                              ", d=" + std::to_string(params.d));
  }
  return cm;
}

std::size_t sparse_max_k(unsigned width) {
  switch (width) {
    case 8:
      return 39;
    case 16:
      return 64;
    default:
      throw Unsupported("unsupported field width " + std::to_string(width));
  }
}

CodeMatrices build_sparse(const CodeParams& params, const Field& field, bool enforce_range) {
  if (params.variant != Variant::Msr) {
    throw Unsupported("the sparse construction is defined for MSR codes only");
  }
  if (enforce_range && params.k > sparse_max_k(field.width())) {
    throw Unsupported("sparse construction is validated for k in [2, " +
                      std::to_string(sparse_max_k(field.width())) + "] in GF(2^" +
                      std::to_string(field.width()) + "), got k=" + std::to_string(params.k));
  }
  const std::size_t n = params.n;
  const std::size_t a = params.alpha;

  std::vector<std::uint64_t> points;
  for (std::size_t j = 0; j < a; ++j) points.push_back(j);
  for (std::size_t i = a; i < n; ++i) points.push_back(i + a + 1);
  require_distinct_points(field, points, "sparse Cauchy");
  for (std::size_t i = 0; i < n; ++i) {
    if ((i + 1) % field.order() == 0) {
      throw InvalidConstruction("sparse lambda denominator vanishes");
    }
  }

  CodeMatrices cm{params, Construction::Sparse, Matrix(field, n, params.d), {}};
  const Element g_alpha = field.exp(a);
  for (std::size_t i = 0; i < n; ++i) {
    const Element x = field.exp(i + a + 1);
    const Element lambda = field.div(Field::sub(x, 1), Field::sub(x, g_alpha));
    cm.lambda.push_back(lambda);
    for (std::size_t j = 0; j < a; ++j) {
      const Element phi = i < a ? Element(i == j ? 1 : 0)
                                : field.inv(Field::sub(x, field.exp(j)));
      cm.psi(i, j) = phi;
      cm.psi(i, a + j) = field.mul(lambda, phi);
    }
  }
  // The validated range covers n = 2k-1 only; other lengths must prove
  // themselves.
  if (enforce_range && n != 2 * params.k - 1 && !validate_construction(cm).overall) {
    throw InvalidConstruction("sparse construction fails validation for n=" + std::to_string(n) +
                              ", k=" + std::to_string(params.k) + "; use n = 2k-1");
  }
  return cm;
}

CodeMatrices build_code(const CodeParams& params, Construction construction, const Field& field) {
  return construction == Construction::Sparse ? build_sparse(params, field)
                                              : build_vanilla(params, field);
}

std::size_t binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    // result * num / i is exact at every step
    if (result > std::numeric_limits<std::size_t>::max() / num) {
      return std::numeric_limits<std::size_t>::max();
    }
    result = result * num / i;
  }
  return result;
}

const ValidationCheck* ValidationReport::find(std::string_view name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

// Calls visit(subset) for every r-subset of [0, n) in lexicographic order
// until it returns false. Returns false if stopped early.
bool for_each_subset(std::size_t n, std::size_t r,
                     const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    if (!visit(idx)) return false;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool structural_certificate(const CodeMatrices& code, bool psi_family) {
  if (psi_family && code.params.variant == Variant::Msr &&
      code.construction == Construction::Sparse) {
    return false;  // [Phi | Lambda Phi] has no closed-form minor argument
  }
  try {
    const CodeMatrices reference = code.construction == Construction::Sparse
                                       ? build_sparse(code.params, code.field(), false)
                                       : build_vanilla_unchecked(code.params, code.field());
    return psi_family ? reference.psi == code.psi : reference.phi() == code.phi();
  } catch (const Error&) {
    return false;
  }
}

ValidationCheck check_rows_independent(const CodeMatrices& code, const Matrix& m, std::size_t r,
                                       std::string name, bool psi_family,
                                       const ValidationOptions& options) {
  ValidationCheck check{std::move(name), true, "exhaustive", {}, {}};
  const std::size_t n = m.rows();
  const std::size_t count = binomial(n, r);
  const std::string count_text = "C(" + std::to_string(n) + "," + std::to_string(r) + ")";
  auto independent = [&](const std::vector<std::size_t>& rows) {
    if (rank(select_rows(m, rows)) == r) return true;
    check.passed = false;
    check.witness = rows;
    check.detail = "rows are linearly dependent";
    return false;
  };

  if (count <= options.exhaustive_limit) {
    for_each_subset(n, r, independent);
    return check;
  }
  if (options.allow_structural && structural_certificate(code, psi_family)) {
    check.method = "structural";
    check.detail = "Cauchy/Vandermonde structure with distinct points; " + count_text +
                   " subsets not enumerated";
    return check;
  }
  if (!options.samples) {
    throw InvalidArgument(check.name + ": " + count_text +
                          " subsets exceed the exhaustive limit; pass a sample count");
  }
  check.method = "sampled(" + std::to_string(*options.samples) + ")";
  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> pool(n);
  for (std::size_t s = 0; s < *options.samples; ++s) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < r; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<std::size_t> rows(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(r));
    std::sort(rows.begin(), rows.end());
    if (!independent(rows)) break;
  }
  return check;
}

}  // namespace

ValidationReport validate_construction(const CodeMatrices& code, const ValidationOptions& options) {
  const CodeParams& p = code.params;
  const Field& f = code.field();
  ValidationReport report;

  ValidationCheck structure{"psi_structure", true, "direct", {}, {}};
  if (code.psi.rows() != p.n || code.psi.cols() != p.d) {
    structure.passed = false;
    structure.detail = "Psi must be n x d";
    report.checks.push_back(structure);
    return report;
  }
  if (p.variant == Variant::Msr) {
    if (code.lambda.size() != p.n) {
      structure.passed = false;
      structure.detail = "lambda must have n entries";
    } else {
      for (std::size_t i = 0; i < p.n && structure.passed; ++i) {
        for (std::size_t j = 0; j < p.alpha; ++j) {
          if (code.psi(i, p.alpha + j) != f.mul(code.lambda[i], code.psi(i, j))) {
            structure.passed = false;
            structure.witness = {i};
            structure.detail = "row is not [phi | lambda phi]";
            break;
          }
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < p.k && structure.passed; ++i) {
      for (std::size_t j = 0; j < p.d; ++j) {
        if (code.psi(i, j) != (i == j ? 1 : 0)) {
          structure.passed = false;
          structure.witness = {i};
          structure.detail = "systematic row is not [e_i | 0]";
          break;
        }
      }
    }
  }
  report.checks.push_back(structure);

  report.checks.push_back(
      check_rows_independent(code, code.psi, p.d, "psi_rows_independent", true, options));
  const std::size_t phi_rows = p.variant == Variant::Msr ? p.alpha : p.k;
  report.checks.push_back(
      check_rows_independent(code, code.phi(), phi_rows, "phi_rows_independent", false, options));

  if (p.variant == Variant::Msr && code.lambda.size() == p.n) {
    ValidationCheck distinct{"lambda_distinct", true, "direct", {}, {}};
    for (std::size_t i = 0; i < p.n && distinct.passed; ++i) {
      for (std::size_t j = i + 1; j < p.n; ++j) {
        if (code.lambda[i] == code.lambda[j]) {
          distinct.passed = false;
          distinct.witness = {i, j};
          distinct.detail = "lambda values coincide";
          break;
        }
      }
    }
    report.checks.push_back(distinct);
  }

  report.overall = std::all_of(report.checks.begin(), report.checks.end(),
                               [](const ValidationCheck& c) { return c.passed; });
  return report;
}

}  // namespace pmrc
