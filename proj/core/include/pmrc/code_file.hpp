#pragma once

#include <iosfwd>
#include <string>

#include "pmrc/pm_construct.hpp"

namespace pmrc {

// A complete product-matrix code: encoding matrix plus message layout.
struct CodeDefinition {
  CodeMatrices matrices;
  IndexMatrix index;

  const CodeParams& params() const noexcept { return matrices.params; }
  const Field& field() const noexcept { return matrices.field(); }
};

// Builds the canonical code for the given parameters.
CodeDefinition make_code(const CodeParams& params, Construction construction, unsigned width);

// Text format:
//   line 1: "variant construction w n k d"   e.g. "msr sparse 8 5 3 4"
//   then Psi in the canonical matrix text form
//   then L as d lines of alpha decimal values
void write_code_definition(std::ostream& out, const CodeDefinition& code);
// Parses and structurally checks the file. Lambda is recovered from Psi for
// MSR codes. The matrices are not required to match the canonical
// construction; see is_canonical().
CodeDefinition read_code_definition(std::istream& in);

void save_code_definition(const std::string& path, const CodeDefinition& code);
CodeDefinition load_code_definition(const std::string& path);

// True when Psi and L equal what make_code() produces for the header fields.
bool is_canonical(const CodeDefinition& code);

}  // namespace pmrc
