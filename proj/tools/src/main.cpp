#include <iostream>

#include "rabiphase_cli/commands.hpp"

int main(int argc, char** argv) { return rabiphase::cli::run_cli(argc, argv, std::cout, std::cerr); }
