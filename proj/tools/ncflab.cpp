#include <iostream>

#include "ncfourier/cli.hpp"

int main(int argc, char** argv) { return ncf::run_cli(argc, argv, std::cout, std::cerr); }
