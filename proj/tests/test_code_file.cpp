#include <gtest/gtest.h>

#include <sstream>

#include "pmrc/code_file.hpp"
#include "pmrc/error.hpp"

using namespace pmrc;

TEST(CodeFile, RoundTripsCanonicalCodes) {
  const CodeDefinition codes[] = {
      make_code(CodeParams::msr(3), Construction::Sparse, 8),
      make_code(CodeParams::msr(5), Construction::Vanilla, 16),
      make_code(CodeParams::make(6, 3, 4, Variant::Mbr), Construction::Vanilla, 8),
  };
  for (const auto& code : codes) {
    std::stringstream s;
    write_code_definition(s, code);
    const CodeDefinition back = read_code_definition(s);
    EXPECT_EQ(back.params(), code.params());
    EXPECT_EQ(back.matrices.psi, code.matrices.psi);
    EXPECT_EQ(back.matrices.lambda, code.matrices.lambda);
    EXPECT_EQ(back.index, code.index);
    EXPECT_TRUE(is_canonical(back));
  }
}

TEST(CodeFile, HeaderLine) {
  std::stringstream s;
  write_code_definition(s, make_code(CodeParams::msr(3), Construction::Sparse, 8));
  std::string first;
  std::getline(s, first);
  EXPECT_EQ(first, "msr sparse 8 5 3 4");
}

TEST(CodeFile, NonCanonicalAndMalformed) {
  const auto code = make_code(CodeParams::msr(3), Construction::Vanilla, 8);
  std::stringstream s;
  write_code_definition(s, code);
  std::string text = s.str();
  // Relabel as sparse: same file, different canonical matrices.
  text.replace(text.find("vanilla"), 7, "sparse");
  std::istringstream relabeled(text);
  EXPECT_FALSE(is_canonical(read_code_definition(relabeled)));

  std::istringstream garbage("msr vanilla 8 5 3\n");
  EXPECT_THROW(read_code_definition(garbage), FormatError);
  std::istringstream truncated(s.str().substr(0, s.str().size() - 6));
  EXPECT_THROW(read_code_definition(truncated), Error);
}
