#include "dyadlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dyadlab::run_cli(argc, argv, std::cout, std::cerr); }
