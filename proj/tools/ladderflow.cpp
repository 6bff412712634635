#include <iostream>

#include "ladderflow/cli.hpp"

int main(int argc, char** argv) { return ladderflow::cli::main(argc, argv, std::cout, std::cerr); }
