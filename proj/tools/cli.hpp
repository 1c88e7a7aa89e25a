#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace pmrc::cli {

// Runs the pmrc command line. args excludes the program name. Returns the
// process exit status: 0 on success, 1 on a runtime error, the CLI11 code
// on a usage error.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace pmrc::cli
