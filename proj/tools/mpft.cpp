#include "mpft/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mpft::cli::main(argc, argv, std::cout, std::cerr); }
