#include <iostream>

#include "hamvar/cli.hpp"

int main(int argc, char** argv) { return hamvar::run_cli(argc, argv, std::cout, std::cerr); }
