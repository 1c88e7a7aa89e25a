#include "cli.hpp"

int main(int argc, char** argv) { return pmrc::cli::cli_main(argc, argv); }
