#include "ecert/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ecert::cli::run(argc, argv, std::cout, std::cerr); }
