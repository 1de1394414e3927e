#include <iostream>

#include "paw1d/cli.hpp"

int main(int argc, char** argv) { return paw1d::run_cli(argc, argv, std::cout, std::cerr); }
