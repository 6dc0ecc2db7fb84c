#include <iostream>

#include "smt_cli.hpp"

int main(int argc, char** argv) { return smt::cli::run(argc, argv, std::cout, std::cerr); }
