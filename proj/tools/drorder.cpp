#include <iostream>

#include "drorder/cli.hpp"

int main(int argc, char** argv) { return drorder::cli::main(argc, argv, std::cout, std::cerr); }
