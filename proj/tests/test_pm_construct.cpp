#include <gtest/gtest.h>

#include <vector>

#include "oracle.hpp"
#include "pmrc/error.hpp"
#include "pmrc/pm_construct.hpp"
#include "test_util.hpp"

using namespace pmrc;

namespace {

std::vector<std::vector<std::uint32_t>> rows_of(const IndexMatrix& l) {
  std::vector<std::vector<std::uint32_t>> out(l.rows(), std::vector<std::uint32_t>(l.cols()));
  for (std::size_t r = 0; r < l.rows(); ++r)
    for (std::size_t c = 0; c < l.cols(); ++c) out[r][c] = l(r, c);
  return out;
}

}  // namespace

TEST(CodeParams, DerivedSizes) {
  const auto msr = CodeParams::make(5, 3, 4, Variant::Msr);
  EXPECT_EQ(msr.alpha, 2u);
  EXPECT_EQ(msr.data_blocks, 6u);
  const auto mbr = CodeParams::make(5, 3, 4, Variant::Mbr);
  EXPECT_EQ(mbr.alpha, 4u);
  EXPECT_EQ(mbr.data_blocks, 9u);
  EXPECT_EQ(CodeParams::msr(8), CodeParams::make(15, 8, 14, Variant::Msr));
  EXPECT_EQ(CodeParams::msr(8).encoded_blocks(), 15u * 7u);
}

TEST(CodeParams, Rejections) {
  EXPECT_THROW(CodeParams::make(6, 3, 3, Variant::Msr), Unsupported);
  EXPECT_THROW(CodeParams::make(4, 3, 4, Variant::Msr), InvalidArgument);
  EXPECT_THROW(CodeParams::make(3, 1, 2, Variant::Mbr), InvalidArgument);
  EXPECT_THROW(CodeParams::make(6, 4, 3, Variant::Mbr), InvalidArgument);
  EXPECT_THROW(parse_variant("MSR"), InvalidArgument);
  EXPECT_EQ(parse_construction("sparse"), Construction::Sparse);
}

TEST(IndexMatrix, MsrLayouts) {
  using Rows = std::vector<std::vector<std::uint32_t>>;
  EXPECT_EQ(rows_of(msr_index_matrix(CodeParams::msr(3))), (Rows{{1, 2}, {2, 3}, {4, 5}, {5, 6}}));
  EXPECT_EQ(rows_of(msr_index_matrix(CodeParams::msr(2))), (Rows{{1}, {2}}));
  for (std::size_t k = 2; k <= 16; ++k) {
    const auto p = CodeParams::msr(k);
    EXPECT_NO_THROW(msr_index_matrix(p).check(p));
  }
}

TEST(IndexMatrix, MbrLayouts) {
  using Rows = std::vector<std::vector<std::uint32_t>>;
  EXPECT_EQ(rows_of(mbr_index_matrix(CodeParams::make(5, 3, 4, Variant::Mbr))),
            (Rows{{1, 2, 3, 7}, {2, 4, 5, 8}, {3, 5, 6, 9}, {7, 8, 9, 0}}));
  EXPECT_EQ(rows_of(mbr_index_matrix(CodeParams::make(3, 2, 2, Variant::Mbr))),
            (Rows{{1, 2}, {2, 3}}));
}

TEST(IndexMatrix, CheckRejectsBrokenLayouts) {
  const auto p = CodeParams::msr(3);
  IndexMatrix l = msr_index_matrix(p);
  l(0, 1) = 3;  // breaks symmetry
  EXPECT_THROW(l.check(p), InvalidConstruction);
  const auto q = CodeParams::make(5, 3, 4, Variant::Mbr);
  IndexMatrix m = mbr_index_matrix(q);
  m(3, 3) = 1;
  EXPECT_THROW(m.check(q), InvalidConstruction);
}

TEST(Vanilla, MsrMatchesPowers) {
  const Field f = Field::make(8);
  const auto cm = build_vanilla(CodeParams::make(5, 3, 4, Variant::Msr), f);
  const Element g = f.generator();
  // Row 2 (1-based): [1, g, g^2, g^3].
  EXPECT_EQ(cm.psi(1, 0), 1);
  EXPECT_EQ(cm.psi(1, 1), g);
  EXPECT_EQ(cm.psi(1, 2), oracle::pow(g, 2, 8));
  EXPECT_EQ(cm.psi(1, 3), oracle::pow(g, 3, 8));
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(cm.psi(0, j), 1);
  const std::vector<Element> lambda{1, oracle::pow(g, 2, 8), oracle::pow(g, 4, 8),
                                    oracle::pow(g, 6, 8), oracle::pow(g, 8, 8)};
  EXPECT_EQ(cm.lambda, lambda);
}

TEST(Sparse, MatchesCauchyFormulas) {
  const Field f = Field::make(8);
  const auto cm = build_sparse(CodeParams::make(5, 3, 4, Variant::Msr), f);
  auto g = [](std::uint64_t e) { return oracle::pow(2, e, 8); };
  // Row 3 (1-based) of Phi: [1/(g^5 - 1), 1/(g^5 - g)].
  EXPECT_EQ(cm.psi(2, 0), oracle::inv(g(5) ^ 1, 8));
  EXPECT_EQ(cm.psi(2, 1), oracle::inv(g(5) ^ g(1), 8));
  // Lambda_1 = (g^3 - 1) / (g^3 - g^2); row 1 of Psi = [1, 0, Lambda_1, 0].
  const Element l1 = oracle::mul(g(3) ^ 1, oracle::inv(g(3) ^ g(2), 8), 8);
  EXPECT_EQ(cm.lambda[0], l1);
  EXPECT_EQ(cm.psi(0, 0), 1);
  EXPECT_EQ(cm.psi(0, 1), 0);
  EXPECT_EQ(cm.psi(0, 2), l1);
  EXPECT_EQ(cm.psi(0, 3), 0);
  // Psi = [Phi | Lambda Phi].
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      EXPECT_EQ(cm.psi(i, j + 2), oracle::mul(cm.lambda[i], cm.psi(i, j), 8));
}

TEST(Sparse, RangeEnforcement) {
  EXPECT_EQ(sparse_max_k(8), 39u);
  EXPECT_EQ(sparse_max_k(16), 64u);
  EXPECT_THROW(build_sparse(CodeParams::msr(40), Field::make(8)), Unsupported);
  EXPECT_THROW(build_sparse(CodeParams::make(5, 3, 4, Variant::Mbr), Field::make(8)),
               Unsupported);
}

TEST(Validation, SparseK8AndVanillaPass) {
  const auto sparse = build_sparse(CodeParams::msr(8), Field::make(8));
  const auto report = validate_construction(sparse);
  EXPECT_TRUE(report.overall);
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name;
  EXPECT_EQ(report.find("psi_rows_independent")->method, "exhaustive");
  for (std::size_t k = 2; k <= 12; ++k) {
    EXPECT_TRUE(validate_construction(build_vanilla(CodeParams::msr(k), Field::make(8))).overall)
        << k;
  }
}

TEST(Validation, SparseFailsJustBeyondRange) {
  const auto cm = build_sparse(CodeParams::msr(40), Field::make(8), false);
  const auto report = validate_construction(cm);
  EXPECT_FALSE(report.overall);
  const auto* check = report.find("psi_rows_independent");
  ASSERT_NE(check, nullptr);
  EXPECT_FALSE(check->passed);
  EXPECT_EQ(check->witness.size(), cm.params.d);
}

TEST(Validation, EqualLambdasGiveWitness) {
  auto cm = build_vanilla(CodeParams::msr(3), Field::make(8));
  cm.lambda[3] = cm.lambda[1];
  for (std::size_t j = 0; j < cm.params.alpha; ++j) {
    cm.psi(3, j + cm.params.alpha) = Field::make(8).mul(cm.lambda[3], cm.psi(3, j));
  }
  const auto report = validate_construction(cm);
  EXPECT_FALSE(report.overall);
  const auto* check = report.find("lambda_distinct");
  ASSERT_NE(check, nullptr);
  EXPECT_FALSE(check->passed);
  EXPECT_EQ(check->witness, (std::vector<std::size_t>{1, 3}));
}

TEST(Validation, MbrConstructionsPass) {
  for (std::size_t k = 2; k <= 5; ++k) {
    for (std::size_t d = k; d <= k + 3; ++d) {
      const auto p = CodeParams::make(d + 2, k, d, Variant::Mbr);
      const auto cm = build_vanilla(p, Field::make(8));
      EXPECT_TRUE(validate_construction(cm).overall) << k << "," << d;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < d; ++j) EXPECT_EQ(cm.psi(i, j), i == j ? 1 : 0);
    }
  }
}

TEST(Validation, OversizedFamilies) {
  // C(77, 38) Phi subsets: structural certificate, or sampling when disabled.
  const auto cm = build_sparse(CodeParams::msr(39), Field::make(8));
  EXPECT_EQ(validate_construction(cm).find("phi_rows_independent")->method, "structural");
  ValidationOptions opts;
  opts.allow_structural = false;
  EXPECT_THROW(validate_construction(cm, opts), InvalidArgument);
  opts.samples = 50;
  const auto sampled = validate_construction(cm, opts);
  EXPECT_TRUE(sampled.overall);
  EXPECT_EQ(sampled.find("phi_rows_independent")->method, "sampled(50)");
}

TEST(Validation, IndependenceAgreesWithOracleRank) {
  const auto cm = build_sparse(CodeParams::msr(4), Field::make(8));
  const auto dense = testutil::to_dense(cm.psi);
  for (const auto& rows : testutil::subsets(cm.params.n, cm.params.d)) {
    oracle::Dense sub;
    for (std::size_t r : rows) sub.push_back(dense[r]);
    EXPECT_EQ(oracle::rank(sub, 8), cm.params.d);
  }
}

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(5, 2), 10u);
  EXPECT_EQ(binomial(77, 76), 77u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(200, 100), SIZE_MAX);
}
