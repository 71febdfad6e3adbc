#include <iostream>

#include "repairkit/cli.hpp"

int main(int argc, char** argv) { return repairkit::run_cli(argc, argv, std::cout, std::cerr); }
